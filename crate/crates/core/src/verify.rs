//! Verification checks and the report format shared by the test suite and
//! the command-line tool.
//!
//! Every check is exact: it passes iff each residual it computes is zero and
//! each side condition holds.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::fixtures::Fixtures;
use crate::integrate::{orthogonality_residuals, stokes_check, StokesTheorem};
use crate::linalg::Echelon;
use crate::moebius::{conformal_residual, differs_by_sign, MapClass, MoebiusMap};
use crate::operators::{stein_weiss_residual, Coordinates, OperatorTag, RsOperators};
use crate::poly::{MVPolynomial, VarGroup};
use crate::radial::{inversion_image, RadialForm};
use crate::scalar::int;
use crate::spaces::{check_monogenic, harmonic_basis, monogenic_basis, u_factor_eigenvalue, vector_mul, Projector, Side};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: &str = "1.0";

const U: VarGroup = VarGroup::U;
const W: VarGroup = VarGroup::W;

/// Highest `x`-degree of randomized fixtures.
pub const FIXTURE_X_DEGREE: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub m_values: Vec<usize>,
    pub k_values: Vec<u32>,
    pub seed: u64,
    pub trials: usize,
    /// Worker threads for the suite; `None` lets rayon decide.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Replaces the projection constant `m + 2k - 2` by `m + 2k - 1`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub mutate_projection: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { m_values: vec![3, 4], k_values: vec![0, 1, 2], seed: 1, trials: 3, workers: None, mutate_projection: false }
    }
}

impl RunConfig {
    pub fn projector(&self, m: usize, k: u32) -> Projector {
        let p = Projector::new(m, k);
        if self.mutate_projection {
            p.with_denominator(int(m as i64 + 2 * k as i64 - 1))
        } else {
            p
        }
    }

    pub fn operators(&self, m: usize, k: u32) -> RsOperators {
        RsOperators::with_projector(m, k, self.projector(m, k))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualSummary {
    /// Residuals and side conditions evaluated.
    pub checked: usize,
    /// How many of them failed.
    pub failed: usize,
    /// Total number of nonzero terms over all residuals.
    pub nonzero_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub theorem: String,
    pub inputs_digest: String,
    pub pass: bool,
    pub residual: ResidualSummary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_time_ms: f64,
}

impl CheckReport {
    /// The report with the wall time cleared, for byte-for-byte comparisons.
    pub fn without_time(&self) -> Self {
        CheckReport { wall_time_ms: 0.0, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: String,
    pub config: RunConfig,
    pub all_pass: bool,
    pub passed: usize,
    pub failed: usize,
    pub reports: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn new(config: RunConfig, mut reports: Vec<CheckReport>) -> Self {
        reports.sort_by(|a, b| a.id.cmp(&b.id));
        let passed = reports.iter().filter(|r| r.pass).count();
        SuiteReport {
            schema_version: SCHEMA_VERSION.to_string(),
            config,
            all_pass: passed == reports.len(),
            passed,
            failed: reports.len() - passed,
            reports,
        }
    }
}

/// Collects residuals and side conditions while a check runs.
struct Tally {
    summary: ResidualSummary,
    notes: Vec<String>,
    digest: Sha256,
}

impl Tally {
    fn new() -> Self {
        Tally { summary: ResidualSummary::default(), notes: Vec::new(), digest: Sha256::new() }
    }

    fn input(&mut self, label: &str, value: impl std::fmt::Display) {
        self.digest.update(label.as_bytes());
        self.digest.update(b"=");
        self.digest.update(value.to_string().as_bytes());
        self.digest.update(b"\n");
    }

    fn residual_terms(&mut self, terms: usize, what: impl FnOnce() -> String) {
        self.summary.checked += 1;
        if terms > 0 {
            self.summary.failed += 1;
            self.summary.nonzero_terms += terms;
            if self.notes.len() < 8 {
                self.notes.push(what());
            }
        }
    }

    fn zero_poly(&mut self, p: &MVPolynomial, what: impl FnOnce() -> String) {
        self.residual_terms(p.coefficient_count(), what);
    }

    fn zero_radial(&mut self, r: &RadialForm, what: impl FnOnce() -> String) {
        self.residual_terms(r.numerator().coefficient_count(), what);
    }

    fn zero_mv(&mut self, v: &Multivector, what: impl FnOnce() -> String) {
        self.residual_terms(v.len(), what);
    }

    fn condition(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.summary.checked += 1;
        if !ok {
            self.summary.failed += 1;
            if self.notes.len() < 8 {
                self.notes.push(what());
            }
        }
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }
}

fn run_check(id: String, theorem: &str, body: impl FnOnce(&mut Tally) -> Result<()>) -> CheckReport {
    let start = Instant::now();
    let mut tally = Tally::new();
    tally.input("id", &id);
    let outcome = body(&mut tally);
    let error = outcome.err().map(|e| e.to_string());
    let pass = error.is_none() && tally.summary.failed == 0;
    CheckReport {
        id,
        theorem: theorem.to_string(),
        inputs_digest: hex::encode(tally.digest.finalize()),
        pass,
        residual: tally.summary,
        notes: tally.notes,
        error,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

pub mod theorem {
    pub const COUNTEREXAMPLE: &str = "Counterexample: D_y is not conformally invariant in the Rarita-Schwinger setting";
    pub const CONFORMAL: &str = "Theorem: conformal invariance of R_k f = 0 under inversion";
    pub const INTERTWINE: &str = "Theorem: intertwining operators of R_k";
    pub const STEIN_WEISS: &str = "Theorem: R_k as the Stein-Weiss projection of the gradient";
    pub const ALMANSI: &str = "Almansi-Fischer decomposition H_k = M_k + u M_(k-1)";
    pub const RANKS: &str = "Almansi-Fischer decomposition: rank H_k = rank M_k + rank M_(k-1)";

    pub fn stokes(t: crate::integrate::StokesTheorem) -> &'static str {
        use crate::integrate::StokesTheorem::*;
        match t {
            Rk => "Theorem: Stokes' theorem for R_k",
            Qk => "Theorem: Stokes' theorem for Q_k",
            Tk => "Theorem: Stokes' theorem for T_k",
            TkStar => "Theorem: Stokes' theorem for T_k^*",
            Alt => "Theorem: alternative form of Stokes' theorem",
            CauchyRk => "Corollary: Cauchy's theorem for R_k",
            CauchyQk => "Corollary: Cauchy's theorem for Q_k",
        }
    }
}

/// `u1 e1 - u2 e2`.
pub fn counterexample_function(m: usize) -> MVPolynomial {
    let a = MVPolynomial::var(m, U, 1).left_mul(&Multivector::generator(m, 1));
    let b = MVPolynomial::var(m, U, 2).left_mul(&Multivector::generator(m, 2));
    &a - &b
}

/// `-2 w y (y1 e1 - y2 e2) / ‖y‖^{m+2}`.
pub fn counterexample_expected(m: usize) -> RadialForm {
    let y = VarGroup::Y;
    let w = MVPolynomial::vector_var(m, W);
    let yv = MVPolynomial::vector_var(m, y);
    let diff = &MVPolynomial::var(m, y, 1).left_mul(&Multivector::generator(m, 1))
        - &MVPolynomial::var(m, y, 2).left_mul(&Multivector::generator(m, 2));
    RadialForm::new((&(&w * &yv) * &diff).scale(&int(-2)), m as u32 + 2, y)
}

/// For `f = u1 e1 - u2 e2`: `D_y` of the inversion image matches the closed
/// form, is nonzero, and is annihilated by `P_1` in `w`.
pub fn cmd_counterexample(m: usize, config: &RunConfig) -> Result<CheckReport> {
    if m < 3 {
        return Err(Error::Hypothesis(format!("the counterexample needs m >= 3, got m = {m}")));
    }
    let proj = config.projector(m, 1).in_group(W);
    Ok(run_check(format!("counterexample/m{m}"), theorem::COUNTEREXAMPLE, |t| {
        let f = counterexample_function(m);
        t.input("f", &f);
        let dy = inversion_image(&f, 1)?.dirac_left_radial();
        let expected = counterexample_expected(m);
        let diff = dy.try_sub(&expected)?;
        t.zero_radial(&diff, || format!("D_y image differs from the closed form by {diff}"));
        t.condition(!dy.is_zero(), || "D_y image vanished".to_string());
        let projected = dy.try_map_numerator(|n| proj.apply(n, Side::Left))?;
        t.zero_radial(&projected, || format!("P_1 D_y image = {projected}"));
        Ok(())
    }))
}

/// Random x-independent `f ∈ M_k`: `R_{k,w}` of its inversion image vanishes.
pub fn cmd_conformal(m: usize, k: u32, config: &RunConfig) -> CheckReport {
    let ops = config.operators(m, k);
    let id = format!("conformal/m{m}/k{k}");
    let mut fx = Fixtures::for_check(config.seed, &id);
    run_check(id, theorem::CONFORMAL, |t| {
        let basis = monogenic_basis(m, k, Side::Left)?;
        for trial in 0..config.trials {
            let f = fx.combination(&basis.elements)?;
            t.input("f", &f);
            let r = conformal_residual(&f, &ops)?;
            t.zero_radial(&r, || format!("trial {trial}: R_k,w of the inversion image = {r}"));
        }
        Ok(())
    })
}

fn elementary_map(class: MapClass, m: usize, fx: &mut Fixtures) -> Result<MoebiusMap> {
    match class {
        MapClass::Inversion => Ok(MoebiusMap::inversion(m)),
        MapClass::Translation => MoebiusMap::translation(&fx.vector(m)),
        MapClass::Dilation => MoebiusMap::dilation(m, &fx.dilation_factor()),
        MapClass::Reflection => MoebiusMap::reflection(m, fx.index(m) + 1),
        MapClass::Composite => Err(Error::Unsupported("intertwining is checked per elementary factor".into())),
    }
}

/// Intertwining identity for one elementary factor on random `f ∈ M_k`.
pub fn cmd_intertwine(class: MapClass, m: usize, k: u32, config: &RunConfig) -> CheckReport {
    let ops = config.operators(m, k);
    let id = format!("intertwine/{class}/m{m}/k{k}");
    let mut fx = Fixtures::for_check(config.seed, &id);
    run_check(id, theorem::INTERTWINE, |t| {
        for trial in 0..config.trials {
            let map = elementary_map(class, m, &mut fx)?;
            let f = fx.monogenic_field(m, k, Side::Left, FIXTURE_X_DEGREE)?;
            t.input("map", format!("{:?}", (&map.a, &map.b, &map.c, &map.d)));
            t.input("f", &f);
            let (lhs, rhs) = map.intertwine_sides(&f, &ops)?;
            let r = lhs.try_sub(&rhs)?;
            if !r.is_zero() && differs_by_sign(&lhs, &rhs) {
                t.note(format!("trial {trial}: the two sides differ exactly by the sign -1"));
            }
            t.zero_radial(&r, || format!("trial {trial}: residual has {} terms", r.numerator().coefficient_count()));
        }
        Ok(())
    })
}

fn stokes_inputs(theorem: StokesTheorem, ops: &RsOperators, fx: &mut Fixtures) -> Result<(MVPolynomial, MVPolynomial)> {
    let (ftag, gtag) = theorem.operators();
    let (m, k) = (ops.m, ops.k);
    if theorem.is_cauchy() {
        return Ok((fx.kernel_field(ops, ftag, Side::Left)?, fx.kernel_field(ops, gtag, Side::Right)?));
    }
    Ok((
        fx.domain_field(ftag, Side::Left, m, k, FIXTURE_X_DEGREE)?,
        fx.domain_field(gtag, Side::Right, m, k, FIXTURE_X_DEGREE)?,
    ))
}

/// One Stokes or Cauchy identity on random inputs over the unit ball.
pub fn cmd_stokes(which: StokesTheorem, m: usize, k: u32, config: &RunConfig) -> CheckReport {
    let ops = config.operators(m, k);
    let id = format!("stokes/{which}/m{m}/k{k}");
    let mut fx = Fixtures::for_check(config.seed, &id);
    run_check(id, theorem::stokes(which), |t| {
        let mut conjugated = 0;
        for trial in 0..config.trials {
            let (f, g) = stokes_inputs(which, &ops, &mut fx)?;
            t.input("f", &f);
            t.input("g", &g);
            let r = stokes_check(which, &f, &g, &ops)?;
            t.zero_mv(&r.residual, || format!("trial {trial}: lhs {} vs rhs {}", r.lhs, r.rhs));
            for (i, alt) in r.alternates.iter().enumerate() {
                t.condition(*alt == r.rhs, || format!("trial {trial}: boundary form {} = {alt}, expected {}", i + 2, r.rhs));
            }
            if r.conjugated_balances {
                conjugated += 1;
            }
        }
        t.note(format!("conjugated pairing balanced in {conjugated} of {} trials (informational)", config.trials));
        Ok(())
    })
}

/// `(q, D_x f)_u = (q, R_k f)_u` for the `M_k` basis, `D_u R_k f = 0`, and
/// the orthogonality `(q, u p)_u = 0` over all basis pairs.
pub fn cmd_stein_weiss(m: usize, k: u32, config: &RunConfig) -> CheckReport {
    let ops = config.operators(m, k);
    let id = format!("stein-weiss/m{m}/k{k}");
    let mut fx = Fixtures::for_check(config.seed, &id);
    run_check(id, theorem::STEIN_WEISS, |t| {
        for trial in 0..config.trials {
            let f = fx.monogenic_field(m, k, Side::Left, FIXTURE_X_DEGREE)?;
            t.input("f", &f);
            for (i, r) in stein_weiss_residual(&f, &ops)?.iter().enumerate() {
                t.zero_poly(r, || format!("trial {trial}: pairing with basis element {i} differs"));
            }
            let rk = ops.rk(&f)?;
            t.condition(check_monogenic(&rk, k, Side::Left, U).is_ok(), || format!("trial {trial}: R_k f is not M_k-valued"));
        }
        if k >= 1 {
            for (i, v) in orthogonality_residuals(m, k)?.iter().enumerate() {
                t.zero_mv(v, || format!("orthogonality pair {i}: {v}"));
            }
        }
        Ok(())
    })
}

/// Every element of the `Cl_m`-valued `H_k` basis splits as `p_k + u p_{k-1}`
/// (and the right mirror), with monogenic parts, exact reconstruction and
/// an idempotent projection.
pub fn cmd_almansi(m: usize, k: u32, config: &RunConfig) -> CheckReport {
    let proj = config.projector(m, k);
    run_check(format!("almansi/m{m}/k{k}"), theorem::ALMANSI, |t| {
        let basis = harmonic_basis(m, k)?;
        for side in [Side::Left, Side::Right] {
            for (i, h) in basis.cl_valued_elements().iter().enumerate() {
                let pk = proj.apply(h, side)?;
                let lower = if k == 0 {
                    MVPolynomial::zero(m)
                } else {
                    crate::spaces::dirac(h, U, side).scale(&u_factor_eigenvalue(m, k).recip())
                };
                t.condition(check_monogenic(&pk, k, side, U).is_ok(), || format!("{side} element {i}: p_k not monogenic"));
                if k > 0 {
                    t.condition(check_monogenic(&lower, k - 1, side, U).is_ok(), || format!("{side} element {i}: p_(k-1) not monogenic"));
                }
                let rebuilt = &(&pk + &vector_mul(&lower, U, side)) - h;
                t.zero_poly(&rebuilt, || format!("{side} element {i}: reconstruction off"));
                let twice = &proj.apply(&pk, side)? - &pk;
                t.zero_poly(&twice, || format!("{side} element {i}: projection not idempotent"));
            }
        }
        t.input("basis", basis.scalar_rank);
        Ok(())
    })
}

/// `rank H_k = rank M_k + rank M_{k-1}` with both sides computed independently,
/// and `M_k ∩ u M_{k-1} = 0`.
pub fn cmd_basis_ranks(m: usize, k: u32) -> CheckReport {
    run_check(format!("basis-ranks/m{m}/k{k}"), theorem::RANKS, |t| {
        let h = harmonic_basis(m, k)?;
        t.condition(h.elements.iter().all(|p| p.laplacian(U).is_zero()), || "harmonic basis not harmonic".into());
        for side in [Side::Left, Side::Right] {
            let top = monogenic_basis(m, k, side)?;
            let mut total = top.scalar_rank;
            let mut coords = Coordinates::default();
            let mut e = Echelon::new();
            for p in &top.elements {
                e.insert(coords.of(p));
            }
            if k > 0 {
                let low = monogenic_basis(m, k - 1, side)?;
                total += low.scalar_rank;
                for q in &low.elements {
                    e.insert(coords.of(&vector_mul(q, U, side)));
                }
            }
            t.condition(total == h.cl_rank(), || format!("{side}: rank M_k + rank M_(k-1) = {total}, rank H_k = {}", h.cl_rank()));
            t.condition(e.rank() == total, || format!("{side}: M_k and u M_(k-1) intersect"));
            t.input(side.name(), total);
        }
        Ok(())
    })
}

/// Dimensions of the spaces involved, over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsRow {
    pub m: usize,
    pub k: u32,
    pub harmonic_scalar: usize,
    pub harmonic: usize,
    pub monogenic: usize,
    pub monogenic_lower: usize,
}

pub fn dims_table(m_values: &[usize], k_values: &[u32]) -> Result<Vec<DimsRow>> {
    let mut rows = Vec::new();
    for &m in m_values {
        for &k in k_values {
            let h = harmonic_basis(m, k)?;
            rows.push(DimsRow {
                m,
                k,
                harmonic_scalar: h.scalar_rank,
                harmonic: h.cl_rank(),
                monogenic: monogenic_basis(m, k, Side::Left)?.scalar_rank,
                monogenic_lower: if k == 0 { 0 } else { monogenic_basis(m, k - 1, Side::Left)?.scalar_rank },
            });
        }
    }
    Ok(rows)
}

type Task = Box<dyn FnOnce() -> CheckReport + Send>;

fn suite_tasks(config: &RunConfig) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    for &m in &config.m_values {
        if m >= 3 {
            let c = config.clone();
            tasks.push(Box::new(move || {
                cmd_counterexample(m, &c).unwrap_or_else(|e| failed_report(format!("counterexample/m{m}"), theorem::COUNTEREXAMPLE, e))
            }));
        }
        for &k in &config.k_values {
            let c = config.clone();
            tasks.push(Box::new(move || cmd_conformal(m, k, &c)));
            let c = config.clone();
            tasks.push(Box::new(move || cmd_almansi(m, k, &c)));
            let c = config.clone();
            tasks.push(Box::new(move || cmd_stein_weiss(m, k, &c)));
            if k == 0 {
                continue;
            }
            tasks.push(Box::new(move || cmd_basis_ranks(m, k)));
            for class in MapClass::ELEMENTARY {
                let c = config.clone();
                tasks.push(Box::new(move || cmd_intertwine(class, m, k, &c)));
            }
            for which in StokesTheorem::ALL {
                let c = config.clone();
                tasks.push(Box::new(move || cmd_stokes(which, m, k, &c)));
            }
        }
    }
    tasks
}

fn failed_report(id: String, theorem: &str, e: Error) -> CheckReport {
    run_check(id, theorem, |_| Err(e))
}

/// Runs every check for the configured `(m, k)` grid on a rayon pool and
/// returns the reports sorted by id.
pub fn cmd_full_suite(config: &RunConfig) -> Result<SuiteReport> {
    let tasks = suite_tasks(config);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.workers {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    let reports: Vec<CheckReport> = pool.install(|| tasks.into_par_iter().map(|t| t()).collect());
    Ok(SuiteReport::new(config.clone(), reports))
}

/// One line per check.
pub fn render_text(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        let _ = write!(
            out,
            "{status} {:<36} checked={} failed={} nonzero_terms={} {:.1}ms",
            r.id, r.residual.checked, r.residual.failed, r.residual.nonzero_terms, r.wall_time_ms
        );
        if let Some(e) = &r.error {
            let _ = write!(out, " error: {e}");
        }
        out.push('\n');
        for n in &r.notes {
            let _ = writeln!(out, "    {n}");
        }
    }
    out
}

/// Whether an operator input of the given tag was requested on the right.
pub fn parse_side(s: &str) -> Result<Side> {
    match s {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        _ => Err(Error::Parse(format!("unknown side {s:?}"))),
    }
}

/// Applies a named operator to a polynomial read from JSON.
pub fn cmd_apply(tag: OperatorTag, side: Side, m: usize, k: u32, f: &MVPolynomial, config: &RunConfig) -> Result<MVPolynomial> {
    if f.dim() != m {
        return Err(Error::DimensionMismatch(f.dim(), m));
    }
    config.operators(m, k).apply(tag, side, f)
}
