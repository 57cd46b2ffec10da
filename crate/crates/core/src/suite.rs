//! Named verification suites, their configuration, and the catalog.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::homotopy::{
    degenerate_module_check, rotation_homotopy_check, verify_lemma1, verify_lemma2, verify_lemma3, SignConvention,
};
use crate::kring::{fusion_verify, ktheory_fo_truncated};
use crate::peterweyl::{haar_state, BasisIndex, Generator, GeneratorOps, TruncatedSpace};
use crate::podles::{check_podles_relations, podles_op, verify_fredholm, PodlesKind};
use crate::qnum::{HalfInt, Precision, QParam};
use crate::report::{anchors, decay_csv, Check, DecayRow, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteName {
    Relations,
    Podles,
    Lemma1,
    Lemma2,
    Lemma3,
    Fredholm,
    Rotation,
    Degenerate,
    Koszul,
    Fusion,
    Foq,
    All,
}

impl SuiteName {
    pub const ALL: [SuiteName; 12] = [
        SuiteName::Relations,
        SuiteName::Podles,
        SuiteName::Lemma1,
        SuiteName::Lemma2,
        SuiteName::Lemma3,
        SuiteName::Fredholm,
        SuiteName::Rotation,
        SuiteName::Degenerate,
        SuiteName::Koszul,
        SuiteName::Fusion,
        SuiteName::Foq,
        SuiteName::All,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Relations => "relations",
            SuiteName::Podles => "podles",
            SuiteName::Lemma1 => "lemma1",
            SuiteName::Lemma2 => "lemma2",
            SuiteName::Lemma3 => "lemma3",
            SuiteName::Fredholm => "fredholm",
            SuiteName::Rotation => "rotation",
            SuiteName::Degenerate => "degenerate",
            SuiteName::Koszul => "koszul",
            SuiteName::Fusion => "fusion",
            SuiteName::Foq => "foq",
            SuiteName::All => "all",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite '{s}' (see list-suites)")))
    }
}

/// One catalog entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteInfo {
    pub name: SuiteName,
    pub summary: &'static str,
    pub parameters: &'static str,
    pub anchors: &'static [&'static str],
}

/// Every suite with its required parameters and the anchors it certifies.
pub fn list_suites() -> Vec<SuiteInfo> {
    use anchors::*;
    let info = |name, summary, parameters, anchors| SuiteInfo { name, summary, parameters, anchors };
    vec![
        info(
            SuiteName::Relations,
            "defining relations and adjoints of the regular representation; Haar state cross-check",
            "--q (|q| < 1), --lmax",
            &[SUQ2_RELATIONS, REGULAR_REP, HAAR_STATE],
        ),
        info(
            SuiteName::Podles,
            "Podleś relations and A/B table expansions",
            "--q, --lmax >= 3",
            &[PODLES_RELATIONS, PODLES_EXPANSIONS],
        ),
        info(
            SuiteName::Lemma1,
            "rescaled coefficient identities and the omega_t *-homomorphism",
            "--q, --lmax, --t-grid",
            &[LEMMA_4_2],
        ),
        info(
            SuiteName::Lemma2,
            "uniform decay of the difference families (CSV with --csv)",
            "--q, --lmax, --t-grid",
            &[LEMMA_4_3],
        ),
        info(
            SuiteName::Lemma3,
            "endpoint identities with the sgn(q) factor on the diagonal band",
            "--q, --lmax >= 2",
            &[LEMMA_4_4],
        ),
        info(
            SuiteName::Fredholm,
            "truncated Fredholm indices and commutator tails (CSV with --csv)",
            "--q, --lmax >= 4",
            &[THEOREM_4_5_INDEX, FREDHOLM_MODULE],
        ),
        info(
            SuiteName::Rotation,
            "rotation homotopy between omega_0 and omega",
            "--q < 0, --lmax >= 3, --t-grid",
            &[THEOREM_4_5_ROTATION],
        ),
        info(SuiteName::Degenerate, "degenerate module intertwiners", "--q, --lmax", &[THEOREM_4_5_DEGENERATE]),
        info(
            SuiteName::Koszul,
            "Koszul complex of n - t and the K-groups",
            "--n >= 2, --D >= 1",
            &[KOSZUL, THEOREM_8_1],
        ),
        info(SuiteName::Fusion, "fusion ring associativity and dimension homomorphisms", "--n >= 2, --q", &[FUSION]),
        info(SuiteName::Foq, "FO(Q) invariants and the SU_q(2) parameter solver", "--seed", &[THEOREM_7_5]),
        info(SuiteName::All, "every suite above (rotation only for q < 0)", "union of the above", &[]),
    ]
}

/// Every anchor that a check may carry.
pub fn catalog_anchors() -> Vec<&'static str> {
    let mut v: Vec<&'static str> = list_suites().iter().flat_map(|s| s.anchors.iter().copied()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Configuration of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: SuiteName,
    pub q: f64,
    pub lmax: HalfInt,
    pub t_grid: usize,
    pub n: i64,
    pub d: usize,
    pub precision: Precision,
    pub seed: u64,
    /// Rotation cut-off; defaults to `floor(lmax / 2)`.
    pub l0: Option<HalfInt>,
    /// Uses `−sgn(q)` in the endpoint identities (mutation testing).
    pub sign_fault: bool,
}

impl SuiteConfig {
    pub fn new(suite: SuiteName, q: f64, lmax: HalfInt) -> Self {
        SuiteConfig {
            suite,
            q,
            lmax,
            t_grid: 11,
            n: 3,
            d: 10,
            precision: Precision::default(),
            seed: 1,
            l0: None,
            sign_fault: false,
        }
    }

    fn strict_q(&self) -> Result<QParam> {
        QParam::strict(self.q)
            .map_err(|_| Error::Usage(format!("suite {} needs 0 < |q| < 1, got {}", self.suite, self.q)))
    }

    fn integer_lmax(&self, min: i64) -> Result<HalfInt> {
        let l = HalfInt::from_int(self.lmax.twice().div_euclid(2));
        if l < HalfInt::from_int(min) {
            return Err(Error::Usage(format!("suite {} needs lmax >= {min}, got {}", self.suite, self.lmax)));
        }
        Ok(l)
    }
}

/// A finished run: the report and any CSV files `(file name, contents)`.
#[derive(Clone, Debug)]
pub struct SuiteOutput {
    pub report: VerificationReport,
    pub csv: Vec<(String, String)>,
}

/// Runs the configured suite. Usage problems are returned as errors;
/// verification failures are reported in the returned report.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteOutput> {
    let start = Instant::now();
    let mut out = dispatch(config)?;
    let r = &mut out.report;
    r.param("suite", config.suite.as_str())
        .param("tol_identity", config.precision.tol_identity)
        .param("tol_decay", config.precision.tol_decay);
    r.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(out)
}

fn dispatch(c: &SuiteConfig) -> Result<SuiteOutput> {
    let p = &c.precision;
    let plain = |report| Ok(SuiteOutput { report, csv: vec![] });
    match c.suite {
        SuiteName::Relations => plain(verify_relations(c.strict_q()?, c.lmax, p)?),
        SuiteName::Podles => plain(check_podles_relations(c.strict_q()?, c.lmax, p)?),
        SuiteName::Lemma1 => plain(verify_lemma1(c.strict_q()?, c.integer_lmax(1)?, c.t_grid, p)?),
        SuiteName::Lemma2 => {
            let top = c.integer_lmax(1)?.twice() / 2;
            let ls: Vec<i64> = (1..=top.max(40)).collect();
            let table = verify_lemma2(c.strict_q()?, &ls, c.t_grid)?;
            let mut report = table.to_report(p);
            report.param("lmax", c.lmax.to_string());
            let csv = vec![("lemma2_decay.csv".to_string(), decay_csv(&table.rows()))];
            Ok(SuiteOutput { report, csv })
        }
        SuiteName::Lemma3 => {
            let conv = if c.sign_fault { SignConvention::Flipped } else { SignConvention::Signed };
            let mut report = verify_lemma3(c.strict_q()?, c.integer_lmax(2)?, p, conv)?;
            if c.sign_fault {
                report.assume("MUTATION: the diagonal identities use -sgn(q)");
            }
            plain(report)
        }
        SuiteName::Fredholm => {
            let (report, rows) = verify_fredholm(c.strict_q()?, c.lmax)?;
            let rows: Vec<DecayRow> =
                rows.into_iter().map(|(l, family, v)| DecayRow { l: l.to_string(), family, sup_residual: v }).collect();
            Ok(SuiteOutput { report, csv: vec![("fredholm_tails.csv".to_string(), decay_csv(&rows))] })
        }
        SuiteName::Rotation => {
            let q = c.strict_q()?;
            if c.q >= 0.0 {
                return Err(Error::Usage(format!("rotation requires q < 0, got {}", c.q)));
            }
            let lmax = c.integer_lmax(3)?;
            let l0 = c.l0.unwrap_or_else(|| HalfInt::from_int(lmax.twice() / 4));
            plain(rotation_homotopy_check(q, c.t_grid, lmax, l0, p)?)
        }
        SuiteName::Degenerate => plain(degenerate_module_check(c.strict_q()?, c.integer_lmax(1)?, p)?),
        SuiteName::Koszul => {
            if c.d < 1 {
                return Err(Error::Usage("--D must be at least 1".into()));
            }
            let (groups, mut report) = ktheory_fo_truncated(c.n, c.d)?;
            report.data.get_or_insert_with(|| serde_json::json!({}))["k_groups"] = serde_json::to_value(&groups)?;
            plain(report)
        }
        SuiteName::Fusion => plain(fusion_verify(c.n, c.strict_q()?, 10, p.tol_identity)?),
        SuiteName::Foq => plain(crate::foq::foq_verify(c.seed, 50, 1e-12)?),
        SuiteName::All => run_all(c),
    }
}

fn run_all(c: &SuiteConfig) -> Result<SuiteOutput> {
    let mut report = VerificationReport::new("all");
    report.param("q", c.q).param("lmax", c.lmax.to_string()).param("t_grid", c.t_grid as u64);
    report.param("n", c.n).param("D", c.d as u64);
    report.seed = Some(c.seed);
    let mut csv = Vec::new();
    for name in SuiteName::ALL {
        if name == SuiteName::All || (name == SuiteName::Rotation && c.q >= 0.0) {
            continue;
        }
        let sub = SuiteConfig { suite: name, ..c.clone() };
        let out = dispatch(&sub)?;
        csv.extend(out.csv);
        report.absorb(out.report);
    }
    if c.q >= 0.0 {
        report.assume("rotation suite skipped: it applies to q < 0 only");
    }
    Ok(SuiteOutput { report, csv })
}

/// Defining relations and adjoint formulas of the regular representation on
/// `Full(lmax)`, plus `φ(γ*γ)` against the Podleś `A` table.
pub fn verify_relations(q: QParam, lmax: HalfInt, precision: &Precision) -> Result<VerificationReport> {
    if lmax < HalfInt::ONE {
        return Err(Error::Usage(format!("relations need lmax >= 1, got {lmax}")));
    }
    let tol = precision.tol_identity;
    let space = TruncatedSpace::full(lmax)?;
    let ops = GeneratorOps::regular(q, space)?;
    let mut rep = VerificationReport::new("relations");
    rep.param("q", q.value()).param("lmax", lmax.to_string());
    for r in ops.relation_residuals(q)? {
        rep.push(Check::residual(r.name, anchors::SUQ2_RELATIONS, r.residual, tol));
    }
    for r in ops.adjoint_residuals()? {
        rep.push(Check::residual(r.name, anchors::REGULAR_REP, r.residual, tol));
    }
    let haar = haar_state(&[Generator::GammaStar, Generator::Gamma], q, lmax)?;
    let a = podles_op(PodlesKind::A, q, space)?.table;
    let unit = BasisIndex::unit();
    let table = a.entry(&unit, &unit);
    rep.push(
        Check::residual(
            "phi(gamma* gamma) = <e0, A e0>",
            anchors::HAAR_STATE,
            (haar.re - table).abs() + haar.im.abs(),
            tol,
        )
        .with_note(format!("phi(gamma* gamma) = {}", haar.re)),
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog() {
        let cat = list_suites();
        assert!(cat.len() >= 11);
        let find = |n: SuiteName| cat.iter().find(|s| s.name == n).unwrap();
        assert!(find(SuiteName::Lemma3).anchors.contains(&"Lemma 4.4"));
        assert!(find(SuiteName::Koszul).anchors.contains(&"§8 Koszul complex"));
        for s in SuiteName::ALL {
            assert_eq!(s.as_str().parse::<SuiteName>().unwrap(), s);
        }
        assert!(matches!("nope".parse::<SuiteName>(), Err(Error::Usage(_))));
    }

    #[test]
    fn rotation_gate() {
        let c = SuiteConfig::new(SuiteName::Rotation, 0.5, HalfInt::from_int(10));
        assert!(matches!(run_suite(&c), Err(Error::Usage(_))));
    }

    #[test]
    fn relations_and_haar() {
        let c = SuiteConfig::new(SuiteName::Relations, 0.5, HalfInt::from_int(6));
        let r = run_suite(&c).unwrap().report;
        assert!(r.passed(), "{}", r.to_json().unwrap());
    }
}
