//! Family presets, the end-to-end run, certificates and their verification.

use std::fmt::Write as _;
use std::str::FromStr;

use log::{debug, info};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bundle::BundleSpec;
use crate::codes::torsion_lower_bound;
use crate::defect::defect_hilbert;
use crate::determinantal::{branch_sextic, corank2_ideal, jacobian_ideal, nodality_of, sample_phi, Irreducibility, SymmetricSection};
use crate::error::{Error, Result};
use crate::ideal::{Ideal, IdealWire};
use crate::poly::{Poly, PrimeField};

/// Resampling attempts before a run is declared degenerate.
pub const MAX_ATTEMPTS: u32 = 16;
/// Degree used for defects of sextic node sets.
pub const DEFECT_DEGREE: u32 = 5;
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Preset {
    Z31,
    Z32,
    Z35,
    Z40,
    A24,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::Z31, Preset::Z32, Preset::Z35, Preset::Z40, Preset::A24];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Z31 => "Z31",
            Preset::Z32 => "Z32",
            Preset::Z35 => "Z35",
            Preset::Z40 => "Z40",
            Preset::A24 => "A24",
        }
    }

    pub fn family(self) -> FamilyPreset {
        let (spec, expected_nodes, expected_defect) = match self {
            Preset::Z31 => (BundleSpec::split(1, &[(-3, 3), (-2, 1)]), 31, ExpectedDefect::Zero),
            Preset::Z32 => (BundleSpec::split(0, &[(-2, 3)]), 32, ExpectedDefect::Zero),
            Preset::Z35 => (BundleSpec::split(1, &[(-3, 6)]), 35, ExpectedDefect::Zero),
            Preset::Z40 => (BundleSpec { delta: 0, omega: vec![(-1, 1)], line: [(-2, 1)].into_iter().collect() }, 40, ExpectedDefect::Zero),
            Preset::A24 => (BundleSpec::split(0, &[(-1, 1), (-2, 1)]), 24, ExpectedDefect::Positive),
        };
        FamilyPreset { name: self, delta: spec.delta, spec, expected_nodes, expected_defect }
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown preset {s}; expected one of Z31, Z32, Z35, Z40, A24")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectedDefect {
    Zero,
    Positive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyPreset {
    pub name: Preset,
    pub spec: BundleSpec,
    pub expected_nodes: u64,
    pub expected_defect: ExpectedDefect,
    pub delta: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// T2 is certified nonzero through dim C - d(Sing B) >= 1.
    Obstructed,
    /// No lower bound on T2 follows.
    Inconclusive,
    /// Every sample was degenerate.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptLog {
    pub attempt: u32,
    pub sample_seed: u64,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub attempts: Vec<AttemptLog>,
    pub primes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub preset: Preset,
    pub seed: u64,
    pub characteristic: u64,
    pub node_count: u64,
    pub sing_equals_w: bool,
    pub nodal: bool,
    pub d_w: u64,
    pub d_sing: u64,
    pub code_dim_lower: u64,
    pub t2_lower: u64,
    pub verdict: Verdict,
    pub provenance: Provenance,
}

/// Everything needed to recompute a certificate without resampling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub schema_version: u32,
    pub preset: Preset,
    pub seed: u64,
    pub attempt: u32,
    pub characteristic: u64,
    pub phi: SymmetricSection,
    pub branch_sextic: Poly,
    pub w: IdealWire,
    pub sing: IdealWire,
}

/// Outcome of a completed run.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub certificate: Certificate,
    pub sample: Option<Sample>,
}

pub fn attempt_seed(seed: u64, attempt: u32) -> u64 {
    seed.wrapping_add((attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Quantities computed from one realized section.
struct Analysis {
    branch: Poly,
    w: Ideal,
    sing: Ideal,
    node_count: u64,
    nodal: bool,
    sing_equals_w: bool,
    d_w: u64,
    d_sing: u64,
}

/// Runs the chain on a fixed section; `Err` means the sample is degenerate.
fn analyse(phi: &SymmetricSection, rng: &mut ChaCha8Rng) -> Result<Analysis> {
    let branch = branch_sextic(phi, rng)?;
    if branch.irreducibility != Irreducibility::Irreducible {
        return Err(Error::Degeneration("branch sextic may be reducible".into()));
    }
    let w = corank2_ideal(phi, rng)?;
    let sing = jacobian_ideal(&branch.poly, rng)?;
    let nodality = nodality_of(&sing, rng)?;
    if !nodality.nodal {
        return Err(Error::Degeneration(format!("branch sextic is not nodal (singular dimension {})", nodality.singular_dimension)));
    }
    let node_count = w.degree()?;
    let sing_equals_w = w.ideal_equal(&sing);
    let d_w = defect_hilbert(&w, DEFECT_DEGREE)?.defect;
    let d_sing = defect_hilbert(&sing, DEFECT_DEGREE)?.defect;
    Ok(Analysis { branch: branch.poly, w, sing, node_count, nodal: true, sing_equals_w, d_w, d_sing })
}

fn analysis_rng(sample_seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sample_seed ^ 0x5eed_5eed_5eed_5eed)
}

fn certificate_from(preset: Preset, seed: u64, field: PrimeField, a: &Analysis, attempts: Vec<AttemptLog>) -> Certificate {
    let code_dim_lower = u64::from(a.node_count > 0);
    let t2_lower = torsion_lower_bound(code_dim_lower, a.d_sing);
    let verdict = if a.nodal && a.sing_equals_w && t2_lower >= 1 { Verdict::Obstructed } else { Verdict::Inconclusive };
    Certificate {
        schema_version: SCHEMA_VERSION,
        preset,
        seed,
        characteristic: field.p(),
        node_count: a.node_count,
        sing_equals_w: a.sing_equals_w,
        nodal: a.nodal,
        d_w: a.d_w,
        d_sing: a.d_sing,
        code_dim_lower,
        t2_lower,
        verdict,
        provenance: Provenance { tool_version: env!("CARGO_PKG_VERSION").to_string(), attempts, primes: vec![field.p()] },
    }
}

/// sample -> B -> w -> Sing(B) -> nodality -> defects -> certificate, with
/// up to [`MAX_ATTEMPTS`] resamples. Deterministic in (preset, seed, p).
pub fn run_family(preset: Preset, seed: u64, field: PrimeField) -> Result<RunResult> {
    let family = preset.family();
    let mut log = Vec::new();
    for attempt in 0..MAX_ATTEMPTS {
        let sample_seed = attempt_seed(seed, attempt);
        let phi = sample_phi(&family.spec, sample_seed, field)?;
        let mut rng = analysis_rng(sample_seed);
        match analyse(&phi, &mut rng) {
            Ok(a) => {
                log.push(AttemptLog { attempt, sample_seed, outcome: "accepted".into() });
                info!("{preset} seed {seed} p {}: {} nodes after {} attempt(s)", field.p(), a.node_count, attempt + 1);
                let certificate = certificate_from(preset, seed, field, &a, log);
                let sample = Sample {
                    schema_version: SCHEMA_VERSION,
                    preset,
                    seed,
                    attempt,
                    characteristic: field.p(),
                    phi,
                    branch_sextic: a.branch,
                    w: a.w.to_wire(),
                    sing: a.sing.to_wire(),
                };
                return Ok(RunResult { certificate, sample: Some(sample) });
            }
            Err(e @ (Error::Degeneration(_) | Error::NotZeroDimensional(_) | Error::RetriesExhausted(..) | Error::DegreeCapExceeded(_))) => {
                debug!("{preset} seed {seed} attempt {attempt}: {e}");
                log.push(AttemptLog { attempt, sample_seed, outcome: e.to_string() });
            }
            Err(e) => return Err(e),
        }
    }
    let certificate = Certificate {
        schema_version: SCHEMA_VERSION,
        preset,
        seed,
        characteristic: field.p(),
        node_count: 0,
        sing_equals_w: false,
        nodal: false,
        d_w: 0,
        d_sing: 0,
        code_dim_lower: 0,
        t2_lower: 0,
        verdict: Verdict::Degenerate,
        provenance: Provenance { tool_version: env!("CARGO_PKG_VERSION").to_string(), attempts: log, primes: vec![field.p()] },
    };
    Ok(RunResult { certificate, sample: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiPrimeReport {
    pub preset: Preset,
    pub seed: u64,
    pub certificates: Vec<Certificate>,
    pub agree: bool,
    pub disagreements: Vec<String>,
}

/// Reruns a preset at several primes and compares node count, d(w) and d(Sing B).
pub fn multi_prime(preset: Preset, seed: u64, primes: &[u64]) -> Result<MultiPrimeReport> {
    if primes.len() < 2 {
        return Err(Error::Invalid("multi-prime comparison needs at least two primes".into()));
    }
    let fields = primes.iter().map(|&p| PrimeField::new(p)).collect::<Result<Vec<_>>>()?;
    let mut certificates = Vec::new();
    for f in fields {
        certificates.push(run_family(preset, seed, f)?.certificate);
    }
    let key = |c: &Certificate| (c.verdict, c.node_count, c.d_w, c.d_sing);
    let reference = key(&certificates[0]);
    let disagreements: Vec<String> = certificates
        .iter()
        .skip(1)
        .filter(|c| key(c) != reference)
        .map(|c| {
            format!(
                "p = {}: (verdict, nodes, d_w, d_sing) = {:?}, p = {} gives {:?}",
                c.characteristic,
                key(c),
                certificates[0].characteristic,
                reference
            )
        })
        .collect();
    Ok(MultiPrimeReport { preset, seed, agree: disagreements.is_empty(), disagreements, certificates })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Verification {
    Verified,
    Mismatch { fields: Vec<String> },
    DifferentPrime { certificate: u64, sample: u64 },
}

/// Recomputes every certified quantity from the stored section.
pub fn verify_certificate(cert: &Certificate, sample: Option<&Sample>) -> Result<Verification> {
    if cert.verdict == Verdict::Degenerate && sample.is_none() {
        let rerun = run_family(cert.preset, cert.seed, PrimeField::new(cert.characteristic)?)?.certificate;
        return Ok(if &rerun == cert { Verification::Verified } else { Verification::Mismatch { fields: vec!["rerun".into()] } });
    }
    let sample = sample.ok_or_else(|| Error::Invalid("the sample artifact is missing".into()))?;
    if sample.characteristic != cert.characteristic {
        return Ok(Verification::DifferentPrime { certificate: cert.characteristic, sample: sample.characteristic });
    }
    let field = PrimeField::new(cert.characteristic)?;
    let mut fields = Vec::new();
    if sample.preset != cert.preset || sample.seed != cert.seed {
        fields.push("preset/seed".to_string());
    }
    let sample_seed = attempt_seed(sample.seed, sample.attempt);
    let resampled = sample_phi(&sample.preset.family().spec, sample_seed, field)?;
    if resampled.realized != sample.phi.realized {
        fields.push("phi".to_string());
    }
    let mut rng = analysis_rng(sample_seed);
    let recomputed = match analyse(&sample.phi, &mut rng) {
        Ok(a) => a,
        Err(Error::Degeneration(msg)) => return Ok(Verification::Mismatch { fields: vec![format!("sample is degenerate: {msg}")] }),
        Err(e) => return Err(e),
    };
    if recomputed.branch != sample.branch_sextic {
        fields.push("branch_sextic".into());
    }
    let expected = certificate_from(cert.preset, cert.seed, field, &recomputed, cert.provenance.attempts.clone());
    let mut check = |name: &str, same: bool| {
        if !same {
            fields.push(name.to_string());
        }
    };
    check("node_count", expected.node_count == cert.node_count);
    check("sing_equals_w", expected.sing_equals_w == cert.sing_equals_w);
    check("nodal", expected.nodal == cert.nodal);
    check("d_w", expected.d_w == cert.d_w);
    check("d_sing", expected.d_sing == cert.d_sing);
    check("code_dim_lower", expected.code_dim_lower == cert.code_dim_lower);
    check("t2_lower", expected.t2_lower == cert.t2_lower);
    check("verdict", expected.verdict == cert.verdict);
    Ok(if fields.is_empty() { Verification::Verified } else { Verification::Mismatch { fields } })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Md,
}

fn bundle_label(spec: &BundleSpec) -> String {
    let mut parts: Vec<String> = spec.omega.iter().map(|&(t, m)| if m == 1 { format!("Ω¹({t})") } else { format!("Ω¹({t})^{m}") }).collect();
    parts.extend(spec.line.iter().rev().map(|(&t, &m)| if m == 1 { format!("O({t})") } else { format!("O({t})^{m}") }));
    parts.join(" ⊕ ")
}

/// Markdown table (one row per certificate) or a JSON array.
pub fn render_report(certs: &[Certificate], format: ReportFormat) -> Result<String> {
    if format == ReportFormat::Json {
        return Ok(serde_json::to_string_pretty(certs)?);
    }
    let mut out = String::new();
    out.push_str("| family | bundle | δ | expected | nodes | Sing(B) = w | nodal | d(w) | d(Sing B) | T₂ ≥ | verdict | seed | p |\n");
    out.push_str("|---|---|---|---|---|---|---|---|---|---|---|---|---|\n");
    for c in certs {
        let fam = c.preset.family();
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {:?} | {} | {} |",
            c.preset,
            bundle_label(&fam.spec),
            fam.delta,
            fam.expected_nodes,
            c.node_count,
            c.sing_equals_w,
            c.nodal,
            c.d_w,
            c.d_sing,
            c.t2_lower,
            c.verdict,
            c.seed,
            c.characteristic
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_accepted() {
        for p in Preset::ALL {
            assert!(p.family().spec.is_accepted(), "{p}");
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("Z33".parse::<Preset>().is_err());
    }

    #[test]
    fn z32_seed_42() {
        let r = run_family(Preset::Z32, 42, PrimeField::default_field()).unwrap();
        let c = &r.certificate;
        assert_eq!((c.node_count, c.d_w, c.d_sing, c.verdict), (32, 0, 0, Verdict::Obstructed));
        assert!(c.t2_lower >= 1);
        let again = run_family(Preset::Z32, 42, PrimeField::default_field()).unwrap();
        assert_eq!(serde_json::to_string(c).unwrap(), serde_json::to_string(&again.certificate).unwrap());
    }

    #[test]
    fn a24_is_inconclusive() {
        let c = run_family(Preset::A24, 3, PrimeField::default_field()).unwrap().certificate;
        assert_eq!(c.node_count, 24);
        assert!(c.d_w >= 1);
        assert_eq!(c.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn verification_detects_tampering() {
        let r = run_family(Preset::Z35, 1, PrimeField::default_field()).unwrap();
        let s = r.sample.as_ref().unwrap();
        assert_eq!(verify_certificate(&r.certificate, Some(s)).unwrap(), Verification::Verified);
        let mut bad = r.certificate.clone();
        bad.node_count += 1;
        assert!(matches!(verify_certificate(&bad, Some(s)).unwrap(), Verification::Mismatch { .. }));
        let mut other = r.certificate.clone();
        other.characteristic = 65537;
        assert!(matches!(verify_certificate(&other, Some(s)).unwrap(), Verification::DifferentPrime { .. }));
        assert!(verify_certificate(&r.certificate, None).is_err());
    }

    #[test]
    fn multi_prime_contract() {
        assert!(multi_prime(Preset::Z32, 1, &[32003]).is_err());
        let rep = multi_prime(Preset::Z32, 1, &[32003, 65537]).unwrap();
        assert!(rep.agree, "{:?}", rep.disagreements);
    }

    #[test]
    fn markdown_report() {
        let c = run_family(Preset::Z32, 5, PrimeField::default_field()).unwrap().certificate;
        let md = render_report(&[c], ReportFormat::Md).unwrap();
        assert!(md.contains("| Z32 | O(-2)^3 | 0 | 32 | 32 | true | true | 0 | 0 | 1 | Obstructed |"));
    }
}
