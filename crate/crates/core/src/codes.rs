//! Binary codes of even sets of nodes.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{DenseMatrix, F2Vector, PrimeField};

/// An F2-subspace of F2^ambient, stored as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CodeWire", try_from = "CodeWire")]
pub struct NodeCode {
    ambient: usize,
    basis: Vec<F2Vector>,
}

/// `{"ambient": n, "generators": [[indices], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeWire {
    pub ambient: usize,
    pub generators: Vec<Vec<usize>>,
}

impl From<NodeCode> for CodeWire {
    fn from(c: NodeCode) -> Self {
        CodeWire { ambient: c.ambient, generators: c.basis.iter().map(|b| b.support()).collect() }
    }
}

impl TryFrom<CodeWire> for NodeCode {
    type Error = Error;

    fn try_from(w: CodeWire) -> Result<Self> {
        let mut gens = Vec::with_capacity(w.generators.len());
        for g in &w.generators {
            if let Some(&bad) = g.iter().find(|&&i| i >= w.ambient) {
                return Err(Error::Dimension(format!("index {bad} outside ambient size {}", w.ambient)));
            }
            gens.push(F2Vector::from_support(w.ambient, g.iter().copied()));
        }
        code_span(w.ambient, &gens)
    }
}

/// The span of `generators` with its canonical basis.
pub fn code_span(ambient: usize, generators: &[F2Vector]) -> Result<NodeCode> {
    let mut basis: Vec<F2Vector> = Vec::new();
    for g in generators {
        if g.len() != ambient {
            return Err(Error::Dimension(format!("generator of length {} in ambient {ambient}", g.len())));
        }
        let mut v = g.clone();
        for b in &basis {
            if v.get(b.first_one().expect("nonzero")) {
                v.xor_assign(b);
            }
        }
        let Some(p) = v.first_one() else { continue };
        for b in basis.iter_mut() {
            if b.get(p) {
                b.xor_assign(&v);
            }
        }
        basis.push(v);
    }
    basis.sort_by_key(|b| b.first_one());
    Ok(NodeCode { ambient, basis })
}

impl NodeCode {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, v: &F2Vector) -> F2Vector {
        let mut v = v.clone();
        for b in &self.basis {
            if v.get(b.first_one().expect("nonzero")) {
                v.xor_assign(b);
            }
        }
        v
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        v.len() == self.ambient && self.reduce(v).is_zero()
    }

    /// All 2^dim elements, zero first.
    pub fn elements(&self) -> Vec<F2Vector> {
        let mut out = vec![F2Vector::zeros(self.ambient)];
        for b in &self.basis {
            let more: Vec<F2Vector> = out.iter().map(|v| v.xor(b)).collect();
            out.extend(more);
        }
        out
    }
}

pub fn code_dim(code: &NodeCode) -> usize {
    code.dim()
}

/// Rank over F2 of a list of vectors.
fn f2_rank(vectors: &[F2Vector]) -> usize {
    code_span(vectors.first().map_or(0, |v| v.len()), vectors).map_or(0, |c| c.dim())
}

/// w is minimal iff the only code elements supported inside w are 0 and w.
/// The code elements supported in w form the kernel of the map c -> sum c_i
/// (b_i outside w), so the test is a rank computation.
pub fn is_minimal(w: &F2Vector, code: &NodeCode) -> Result<bool> {
    if !code.contains(w) {
        return Err(Error::Invalid("the set is not an element of the code".into()));
    }
    if w.is_zero() {
        return Ok(false);
    }
    let outside = F2Vector::ones(code.ambient).xor(w);
    let restricted: Vec<F2Vector> = code.basis.iter().map(|b| b.and(&outside)).collect();
    Ok(code.dim() - f2_rank(&restricted) == 1)
}

/// The sum w_I of the subsets selected by the bits of `mask`.
fn combination(ws: &[F2Vector], mask: u64) -> F2Vector {
    let mut acc = F2Vector::zeros(ws[0].len());
    for (i, w) in ws.iter().enumerate() {
        if mask >> i & 1 == 1 {
            acc.xor_assign(w);
        }
    }
    acc
}

/// Checks the conclusion dim K >= m of the reduction lemma after verifying
/// its hypotheses exactly: the w_i are independent and K meets the
/// coordinate subspace of every nonzero combination w_I. K is given by a
/// basis over F_p.
pub fn red_to_algebra_check(field: PrimeField, ws: &[F2Vector], k: &[Vec<u64>]) -> Result<bool> {
    let m = ws.len();
    if m == 0 {
        return Ok(true);
    }
    if m >= 24 {
        return Err(Error::Hypothesis(format!("{m} subsets is too many to enumerate")));
    }
    let n = ws[0].len();
    if ws.iter().any(|w| w.len() != n) || k.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension("lengths differ".into()));
    }
    if f2_rank(ws) != m {
        return Err(Error::Hypothesis("subsets are linearly dependent over F2".into()));
    }
    let dim_k = if k.is_empty() { 0 } else { DenseMatrix::from_rows(k).rank(field) };
    if dim_k != k.len() {
        return Err(Error::Hypothesis("K is not given by a basis".into()));
    }
    for mask in 1u64..(1 << m) {
        let w = combination(ws, mask);
        let outside: Vec<usize> = (0..n).filter(|&i| !w.get(i)).collect();
        // vectors of K vanishing outside w_I: kernel of the restriction
        let meets = if outside.is_empty() {
            dim_k > 0
        } else {
            let rows: Vec<Vec<u64>> = outside.iter().map(|&i| k.iter().map(|v| v[i]).collect()).collect();
            dim_k > 0 && DenseMatrix::from_rows(&rows).rank(field) < dim_k
        };
        if !meets {
            return Err(Error::Hypothesis(format!("K misses the coordinate space of combination {mask:#b}")));
        }
    }
    Ok(dim_k >= m)
}

/// A random instance satisfying the hypotheses of [`red_to_algebra_check`]:
/// independent subsets and K spanned by a random basis of the coordinate
/// space of a minimal hitting set of all nonzero combinations.
pub fn random_lemma_instance<R: Rng + ?Sized>(rng: &mut R, field: PrimeField, n: usize, m: usize) -> (Vec<F2Vector>, Vec<Vec<u64>>) {
    assert!(m >= 1 && m <= n);
    let ws = loop {
        let ws: Vec<F2Vector> = (0..m).map(|_| F2Vector::from_bits(&(0..n).map(|_| rng.gen_bool(0.4)).collect::<Vec<_>>())).collect();
        if f2_rank(&ws) == m {
            break ws;
        }
    };
    let combos: Vec<F2Vector> = (1u64..(1 << m)).map(|mask| combination(&ws, mask)).collect();
    let mut hit: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..combos.len()).collect();
    order.shuffle(rng);
    for &c in &order {
        if !hit.iter().any(|&s| combos[c].get(s)) {
            let supp = combos[c].support();
            hit.push(*supp.choose(rng).expect("nonzero combination"));
        }
    }
    hit.shuffle(rng);
    let mut i = 0;
    while i < hit.len() {
        let s = hit.remove(i);
        if !combos.iter().all(|c| hit.iter().any(|&t| c.get(t))) {
            hit.insert(i, s);
            i += 1;
        }
    }
    let r = hit.len();
    let change = loop {
        let rows: Vec<Vec<u64>> = (0..r).map(|_| (0..r).map(|_| field.random(rng)).collect()).collect();
        if DenseMatrix::from_rows(&rows).rank(field) == r {
            break rows;
        }
    };
    let k = change
        .iter()
        .map(|row| {
            let mut v = vec![0u64; n];
            for (c, &s) in row.iter().zip(&hit) {
                v[s] = *c;
            }
            v
        })
        .collect();
    (ws, k)
}

/// max(0, dim C - d(Sing B)): a lower bound for the dimension of the
/// 2-torsion obstruction.
pub fn torsion_lower_bound(code_dim: u64, defect_sing: u64) -> u64 {
    code_dim.saturating_sub(defect_sing)
}

/// If every nonzero code element has defect at least 1 then d(Sing B) must
/// be at least dim C. `defects` lists (element, defect) for every nonzero
/// element. A false return signals an inconsistency in the inputs.
pub fn codes_defect_consistency(code: &NodeCode, defects: &[(F2Vector, u64)], defect_sing: u64) -> Result<bool> {
    let mut seen: Vec<&F2Vector> = Vec::new();
    for (v, _) in defects {
        if !code.contains(v) || v.is_zero() {
            return Err(Error::Invalid("defect given for a vector outside the nonzero code".into()));
        }
        seen.push(v);
    }
    seen.sort();
    seen.dedup();
    if seen.len() as u64 != (1u64 << code.dim()) - 1 {
        return Err(Error::Invalid(format!("defects given for {} of {} nonzero elements", seen.len(), (1u64 << code.dim()) - 1)));
    }
    if defects.iter().all(|(_, d)| *d >= 1) {
        Ok(defect_sing >= code.dim() as u64)
    } else {
        Ok(true)
    }
}

/// Ambient size of [`type_d_family`].
pub const TYPE_D_NODES: usize = 56;

/// A recorded generator family for a 56-node code of dimension 7.
///
/// The nodes are indexed by (row, point) with 8 rows and the 7 points of
/// the Fano plane. Four generators inflate words of the Hamming code across
/// all rows (weights 24, 24, 32 and the full set of 56); three more take the
/// rows with a fixed bit set and drop one point (weight 24).
pub fn type_d_family() -> Vec<F2Vector> {
    let idx = |row: usize, point: usize| 7 * row + point;
    // Fano points are the nonzero vectors 1..=7 of F2^3, point i <-> i + 1
    let inflate = |points: &[usize]| F2Vector::from_support(TYPE_D_NODES, (0..8).flat_map(|r| points.iter().map(move |&p| idx(r, p - 1))));
    let mut gens = vec![inflate(&[1, 2, 3]), inflate(&[1, 4, 5]), inflate(&[1, 3, 5, 7]), inflate(&[1, 2, 3, 4, 5, 6, 7])];
    for bit in 0..3 {
        let dropped = (1usize << bit) - 1;
        let support = (0..8).filter(|r| r >> bit & 1 == 1).flat_map(|r| (0..7).filter(move |&p| p != dropped).map(move |p| idx(r, p)));
        gens.push(F2Vector::from_support(TYPE_D_NODES, support));
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(n: usize, s: &[usize]) -> F2Vector {
        F2Vector::from_support(n, s.iter().copied())
    }

    #[test]
    fn span_and_dim() {
        let w = v(10, &[1, 2, 3]);
        assert_eq!(code_span(10, std::slice::from_ref(&w)).unwrap().dim(), 1);
        assert_eq!(code_span(10, &[w.clone(), w.clone()]).unwrap().dim(), 1);
        assert!(code_span(10, &[v(9, &[1])]).is_err());
    }

    #[test]
    fn canonical_basis_is_unique() {
        let a = v(8, &[0, 1, 2]);
        let b = v(8, &[2, 3]);
        let c1 = code_span(8, &[a.clone(), b.clone()]).unwrap();
        let c2 = code_span(8, &[a.xor(&b), b.clone(), a.clone()]).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(code_span(8, c1.basis()).unwrap(), c1);
    }

    #[test]
    fn minimality() {
        let a = v(8, &[0, 1, 2]);
        let b = v(8, &[4, 5]);
        let code = code_span(8, &[a.clone(), b.clone()]).unwrap();
        assert!(is_minimal(&a, &code).unwrap());
        assert!(is_minimal(&b, &code).unwrap());
        assert!(!is_minimal(&a.xor(&b), &code).unwrap());
        assert!(is_minimal(&v(8, &[7]), &code).is_err());
    }

    #[test]
    fn type_d_code() {
        let gens = type_d_family();
        let code = code_span(TYPE_D_NODES, &gens).unwrap();
        assert_eq!(code.dim(), 7);
        let all = F2Vector::ones(TYPE_D_NODES);
        assert!(code.contains(&all));
        assert!(!is_minimal(&all, &code).unwrap());
        let weights: Vec<usize> = gens.iter().map(|g| g.weight()).collect();
        assert_eq!(weights, vec![24, 24, 32, 56, 24, 24, 24]);
    }

    #[test]
    fn lemma_instances() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let n = rng.gen_range(4..20);
            let m = rng.gen_range(1..=n.min(6));
            let (ws, k) = random_lemma_instance(&mut rng, f, n, m);
            assert!(red_to_algebra_check(f, &ws, &k).unwrap());
        }
        let w = v(4, &[0, 1]);
        assert!(red_to_algebra_check(f, std::slice::from_ref(&w), &[vec![1, 0, 0, 0]]).unwrap());
        assert!(matches!(red_to_algebra_check(f, &[w], &[vec![0, 0, 1, 0]]), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn torsion_bound() {
        assert_eq!(torsion_lower_bound(1, 0), 1);
        assert_eq!(torsion_lower_bound(7, 4), 3);
        assert_eq!(torsion_lower_bound(1, 5), 0);
        for a in 0..=10 {
            for b in 0..=10 {
                assert!(torsion_lower_bound(a, b) + b >= a);
                assert_eq!(torsion_lower_bound(a, b) + b == a, a >= b);
            }
        }
    }

    #[test]
    fn consistency_needs_all_defects() {
        let code = code_span(6, &[v(6, &[0, 1]), v(6, &[2, 3])]).unwrap();
        let els: Vec<F2Vector> = code.elements().into_iter().skip(1).collect();
        let all: Vec<(F2Vector, u64)> = els.iter().map(|e| (e.clone(), 1)).collect();
        assert!(codes_defect_consistency(&code, &all, 2).unwrap());
        assert!(!codes_defect_consistency(&code, &all, 1).unwrap());
        assert!(codes_defect_consistency(&code, &all[..2], 2).is_err());
        let zeros: Vec<(F2Vector, u64)> = els.iter().map(|e| (e.clone(), 0)).collect();
        assert!(codes_defect_consistency(&code, &zeros, 0).unwrap());
    }

    #[test]
    fn collinear_groups_are_consistent() {
        // three groups of 8 collinear points; every union has positive 5-defect
        use crate::defect::defect_eval;
        let f = PrimeField::new(32003).unwrap();
        let lines = [([1u64, 0, 0, 0], [0u64, 1, 0, 0]), ([0, 0, 1, 0], [0, 0, 0, 1]), ([1, 1, 1, 1], [1, 2, 3, 5])];
        let pts: Vec<[u64; 4]> = lines
            .iter()
            .flat_map(|(p, q)| (1..=8u64).map(move |t| std::array::from_fn(|i| (p[i] + t * q[i]) % 32003)))
            .collect();
        let gens: Vec<F2Vector> = (0..3).map(|g| v(24, &(8 * g..8 * g + 8).collect::<Vec<_>>())).collect();
        let code = code_span(24, &gens).unwrap();
        let defects: Vec<(F2Vector, u64)> = code
            .elements()
            .into_iter()
            .skip(1)
            .map(|e| {
                let sub: Vec<[u64; 4]> = e.support().iter().map(|&i| pts[i]).collect();
                let d = defect_eval(f, &sub, 5).unwrap().defect;
                (e, d)
            })
            .collect();
        assert!(defects.iter().all(|(_, d)| *d >= 1));
        let d_all = defect_eval(f, &pts, 5).unwrap().defect;
        assert!(codes_defect_consistency(&code, &defects, d_all).unwrap());
    }
}
