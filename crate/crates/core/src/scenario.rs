//! Named experiment suites. Each suite turns a [`ScenarioConfig`] into a
//! [`Report`]: a list of inequality records, each carrying both sides.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::calculus::{self, SubmarkovianGenerator};
use crate::dilation::{self, DilationGeometry};
use crate::io::{read_json, write_json, GeneratorDocument, KernelDocument, MatrixDocument};
use crate::lp::{PositiveOperator, SignedOperator, WeightedLpSpace};
use crate::multiplier::{self, ConeSymbol, LogGrid, MellinIdentity};
use crate::special::complex_gamma;
use crate::transference::{self, TimeKernel};
use crate::{par, random, Error, Result};

pub const SUITES: [&str; 12] = [
    "dilation-verify",
    "powers",
    "cone",
    "ergodic",
    "transfer",
    "square",
    "maximal",
    "mellin",
    "mihlin",
    "gamma",
    "khinchin",
    "vn",
];

/// Suites that never draw random numbers and so run without a seed.
const DETERMINISTIC: [&str; 2] = ["mellin", "mihlin"];

/// Suite name, inputs and numeric parameters. Empty lists and `None` select
/// the suite's defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub suite: String,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    /// Matrix document.
    pub input: Option<PathBuf>,
    /// Generator document.
    pub generator: Option<PathBuf>,
    /// Kernel document.
    pub kernel: Option<PathBuf>,
    pub p: Vec<f64>,
    pub gammas: Vec<f64>,
    pub gamma_max: Option<f64>,
    pub depth: Option<usize>,
    pub trials: Option<usize>,
    pub window: Option<usize>,
    /// Dimension of random instances.
    pub n: Option<usize>,
    pub angles: Vec<f64>,
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn new(suite: &str) -> Self {
        Self { suite: suite.to_string(), ..Default::default() }
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    fn seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| Error::Input(format!("suite `{}` is randomized and needs a seed", self.suite)))
    }

    fn ps(&self, default: &[f64]) -> Result<Vec<f64>> {
        let ps = if self.p.is_empty() { default.to_vec() } else { self.p.clone() };
        if let Some(&p) = ps.iter().find(|p| !(**p >= 1.0) || !p.is_finite()) {
            return Err(Error::InvalidExponent(p));
        }
        Ok(ps)
    }

    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn generator_or_random(&self, rng: &mut ChaCha8Rng) -> Result<SubmarkovianGenerator> {
        match &self.generator {
            Some(path) => read_json::<GeneratorDocument>(path)?.to_generator(),
            None => Ok(random::generator(rng, self.n.unwrap_or(5))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `lhs ≤ rhs + tolerance`.
    Le,
    /// `|lhs − rhs| ≤ tolerance`.
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub verdict: Verdict,
}

impl Record {
    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let ok = lhs <= rhs + tolerance;
        Self::build(name.into(), lhs, rhs, tolerance, Relation::Le, ok)
    }

    pub fn eq(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let ok = (lhs - rhs).abs() <= tolerance;
        Self::build(name.into(), lhs, rhs, tolerance, Relation::Eq, ok)
    }

    fn build(name: String, lhs: f64, rhs: f64, tolerance: f64, relation: Relation, ok: bool) -> Self {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        Self { name, lhs, rhs, tolerance, relation, verdict }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub config: ScenarioConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub records: Vec<Record>,
    /// Scan tables and geometry summaries keyed by name.
    pub tables: BTreeMap<String, Value>,
    pub environment: Environment,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.records.iter().all(Record::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.passed())
    }

    /// 0 when every record passes, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            2
        }
    }

    /// `name,lhs,rhs,tolerance,relation,verdict` lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,lhs,rhs,tolerance,relation,verdict\n");
        for r in &self.records {
            let rel = if r.relation == Relation::Le { "le" } else { "eq" };
            let v = if r.passed() { "pass" } else { "fail" };
            out.push_str(&format!("\"{}\",{:e},{:e},{:e},{rel},{v}\n", r.name.replace('"', "'"), r.lhs, r.rhs, r.tolerance));
        }
        out
    }

    /// The report without its timing field, for replay comparisons.
    pub fn content(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("elapsed_ms");
        v
    }
}

#[derive(Default)]
struct Output {
    records: Vec<Record>,
    tables: BTreeMap<String, Value>,
}

impl Output {
    fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    fn table(&mut self, name: impl Into<String>, v: impl Serialize) {
        self.tables.insert(name.into(), serde_json::to_value(v).expect("table serializes"));
    }
}

/// Runs the suite and writes the report (and CSV) when paths are set.
pub fn run(config: &ScenarioConfig) -> Result<Report> {
    let start = Instant::now();
    let suite = config.suite.as_str();
    if !SUITES.contains(&suite) {
        return Err(Error::UnknownSuite(config.suite.clone()));
    }
    if !DETERMINISTIC.contains(&suite) {
        config.seed()?;
    }
    let mut out = Output::default();
    match suite {
        "dilation-verify" => dilation_suite(config, &mut out)?,
        "powers" => powers_suite(config, &mut out)?,
        "cone" => cone_suite(config, &mut out)?,
        "ergodic" => ergodic_suite(config, &mut out)?,
        "transfer" => transfer_suite(config, &mut out)?,
        "square" => square_suite(config, &mut out)?,
        "maximal" => maximal_suite(config, &mut out)?,
        "mellin" => mellin_suite(config, &mut out)?,
        "mihlin" => mihlin_suite(config, &mut out)?,
        "gamma" => gamma_suite(config, &mut out)?,
        "khinchin" => khinchin_suite(config, &mut out)?,
        "vn" => vn_suite(config, &mut out)?,
        _ => unreachable!("checked above"),
    }
    let mut echo = config.clone();
    echo.report = None;
    echo.csv = None;
    let report = Report {
        suite: config.suite.clone(),
        records: out.records,
        tables: out.tables,
        environment: Environment { version: env!("CARGO_PKG_VERSION").to_string(), config: echo },
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    if let Some(path) = &config.report {
        write_json(path, &report)?;
    }
    if let Some(path) = &config.csv {
        std::fs::write(path, report.to_csv())?;
    }
    Ok(report)
}

fn rng_for(config: &ScenarioConfig, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(par::derive_seed(config.seed.unwrap_or(0), stream))
}

fn geometry_summary(g: &DilationGeometry, counts: &[usize]) -> Value {
    json!({ "n": g.n, "p": g.p, "depth": g.depth, "u": g.u, "v": g.v, "xi": g.xi, "eta": g.eta, "rho": g.rho, "cell_counts": counts })
}

fn dilation_suite(c: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let depth = c.depth.unwrap_or(8);
    let trials = c.trials(20);
    let tol = c.tol(1e-10);
    let seed = c.seed()?;
    let mut instances: Vec<(String, SignedOperator, bool)> = Vec::new();
    if let Some(path) = &c.input {
        let doc: MatrixDocument = read_json(path)?;
        let ps = if c.p.is_empty() { vec![doc.p] } else { c.ps(&[])? };
        for p in ps {
            let mut d = doc.clone();
            d.p = p;
            let positive = d.is_real() && d.real_entries()?.iter().all(|&x| x >= 0.0);
            instances.push((format!("input p={p}"), d.to_signed()?, positive));
        }
    } else {
        let mut rng = rng_for(c, 0);
        let count = c.n.unwrap_or(4);
        for i in 0..count {
            let n = 2 + i % 7;
            let m = random::substochastic(&mut rng, n, 3);
            for &p in &c.ps(&[1.0, 1.5, 2.0, 3.0])? {
                let op = SignedOperator::from_real(WeightedLpSpace::unweighted(n, p)?, &m)?;
                instances.push((format!("matrix {i} (n={n}) p={p}"), op, true));
            }
        }
    }
    for (k, (name, op, positive)) in instances.iter().enumerate() {
        let s = par::derive_seed(seed, 1 + k as u64);
        let (geom, report) = if *positive {
            let pos = PositiveOperator::new(op.space().clone(), op.entries().map(|z| z.re))?;
            (dilation::build_positive_dilation(&pos, depth, 1e-9)?, dilation::verify_dilation(&pos, depth, trials, s, 1e-9)?)
        } else {
            (dilation::build_dilation(op, depth, 1e-9)?, dilation::verify_subpositive(op, depth, trials, s, 1e-9)?)
        };
        out.push(Record::le(format!("{name}: max_k ‖P S^k Dα − D T^k α‖_p"), report.max_error, 0.0, tol));
        out.push(Record::le(format!("{name}: max_j |Σ_i ξ_ij − 1|"), geom.xi_column_defect(), 0.0, 1e-12));
        out.push(Record::le(format!("{name}: max_i Σ_j η_ij − 1"), geom.eta_row_excess(), 0.0, 1e-12));
        out.push(Record::le(format!("{name}: ρ defect"), geom.rho_defect(), 0.0, 1e-12));
        out.table(format!("{name}: geometry"), geometry_summary(&geom, &report.cell_counts));
        out.table(format!("{name}: per-k errors"), &report.per_k_errors);
    }
    Ok(())
}

fn powers_suite(c: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let mut rng = rng_for(c, 0);
    let gen = c.generator_or_random(&mut rng)?;
    let dec = gen.decompose()?;
    let gammas = if c.gammas.is_empty() {
        let g = c.gamma_max.unwrap_or(6.0).floor() as i64;
        (-g..=g).map(|x| x as f64).collect()
    } else {
        c.gammas.clone()
    };
    let tol = c.tol(1e-10);
    let powers: Vec<DMatrix<Complex64>> = gammas.iter().map(|&g| dec.imaginary_power(g)).collect::<Result<_>>()?;
    for (g, m) in gammas.iter().zip(&powers) {
        out.push(Record::eq(format!("‖(−A)^{{iγ}}‖_2(μ) at γ={g}"), calculus::weighted_two_norm(m, &dec.mu), 1.0, tol));
    }
    for (i, &g) in gammas.iter().enumerate() {
        let h = gammas[(i + 1) % gammas.len()];
        let lhs = &powers[i] * &powers[(i + 1) % gammas.len()];
        let rhs = dec.imaginary_power(g + h)?;
        out.push(Record::le(format!("group law γ={g}, δ={h}"), (lhs - rhs).camax(), 0.0, tol));
    }
    let ps: Vec<f64> = c.ps(&[1.5, 3.0])?.into_iter().filter(|&p| p != 2.0).collect();
    if !ps.is_empty() {
        let rows = calculus::cowling_bound_scan(&dec, &gammas, &ps, c.seed()?)?;
        for r in &rows {
            out.push(Record::le(format!("lower ≤ interpolation bound γ={} p={}", r.gamma, r.p), r.lower, r.upper, 1e-9));
        }
        out.table("cowling", rows);
    }
    Ok(())
}

fn cone_suite(c: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let mut rng = rng_for(c, 0);
    let gen = c.generator_or_random(&mut rng)?;
    let dec = gen.decompose()?;
    let angles = if c.angles.is_empty() { (0..=12).map(|k| k as f64 * PI / 24.0).collect() } else { c.angles.clone() };
    let radii = [0.1, 0.5, 1.0, 2.0, 5.0];
    let seed = c.seed()?;
    for (i, &p) in c.ps(&[1.5, 3.0])?.iter().enumerate() {
        let scan = calculus::cone_contractivity_scan(&dec, p, &angles, &radii, par::derive_seed(seed, i as u64));
        for &(psi, worst) in &scan.rows {
            if psi <= scan.liskevich_perelmuter_angle {
                out.push(Record::le(format!("p={p} ψ={psi:.6}: sup_r ‖T_{{re^{{iψ}}}}‖_p"), worst, 1.0, 1e-8));
            }
        }
        let limit = calculus::cone_maximal_angle(p);
        if limit > 0.0 {
            let f: Vec<Complex64> = (0..dec.n()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let m = calculus::cone_maximal(&dec, &f, 0.5 * limit, p, 16)?;
            out.push(Record::le(format!("p={p}: cone maximal ratio at half the admissible angle is at least 1"), 1.0, m.ratio, 1e-12));
        }
        out.table(format!("scan p={p}"), scan);
    }
    Ok(())
}

/// `A` with its diagonal reset so that every row sums to zero.
fn conservative_version(g: &SubmarkovianGenerator) -> Result<SubmarkovianGenerator> {
    let n = g.n();
    let mut a = g.a.clone();
    for i in 0..n {
        a[(i, i)] = -(0..n).filter(|&j| j != i).map(|j| a[(i, j)]).sum::<f64>();
    }
    SubmarkovianGenerator::conservative(g.mu.clone(), a)
}

fn log_times() -> Vec<f64> {
    (0..=48).map(|k| 10f64.powf(-3.0 + k as f64 / 8.0)).collect()
}

fn ergodic_suite(c: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let trials = c.trials(10);
    for t in 0..trials {
        let mut rng = rng_for(c, t as u64);
        let gen = if c.generator.is_some() { c.generator_or_random(&mut rng)? } else { random::generator(&mut rng, 2 + t % 5) };
        let dec = gen.decompose()?;
        let cons = conservative_version(&gen)?.decompose()?;
        for &p in &c.ps(&[1.5, 3.0])? {
            let one = calculus::ergodic_maximal(&cons, &vec![1.0; gen.n()], p, &log_times())?;
            out.push(Record::eq(format!("trial {t} p={p}: constant f on the conservative generator"), one.ratio, 1.0, 1e-12));
            if p > 1.0 {
                let f: Vec<f64> = (0..gen.n()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let m = calculus::ergodic_maximal(&dec, &f, p, &log_times())?;
                out.push(Record::le(format!("trial {t} p={p}: ergodic maximal ratio ≤ p/(p−1)"), m.ratio, p / (p - 1.0), 1e-9));
            }
        }
    }
    Ok(())
}

fn transfer_suite(c: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let trials = c.trials(10);
    let seed = c.seed()?;
    let ps = c.ps(&[1.0, 1.5, 2.0, 3.0, 4.0])?;
    let fixed_kernel = match &c.kernel {
        Some(path) => Some(read_json::<KernelDocument>(path)?.to_kernel()?),
        None => None,
    };
    let rows = par::map_range(trials, |t| -> Result<Vec<Record>> {
        let mut rng = rng_for(c, t as u64);
        let gen = if c.generator.is_some() { c.generator_or_random(&mut rng)? } else { random::generator(&mut rng, 2 + t % 5) };
        let dec = gen.decompose()?;
        let k = fixed_kernel.clone().unwrap_or_else(|| random::smooth_kernel(&mut rng, 0.05));
        let p = ps[t % ps.len()];
        let chk = transference::transference_check(&k, &dec, p, par::derive_seed(seed, t as u64))?;
        let mut recs = vec![
            Record::le(format!("trial {t} p={p}: transferred lower ≤ convolver upper"), chk.transferred_lower, chk.convolver_upper, 1e-8),
            Record::le(format!("trial {t}: max_k |Lk(−λ_k)| ≤ sup |k̂|"), chk.spectral_max, chk.symbol_sup, 1e-9),
        ];
        let k2 = random::smooth_kernel(&mut rng, k.h);
        let prod = transference::transfer_operator(&k, &dec)? * transference::transfer_operator(&k2, &dec)?;
        let conv = transference::transfer_operator(&k.convolve(&k2)?, &dec)?;
        recs.push(Record::le(format!("trial {t}: transfer(k⋆g) − transfer(k)·transfer(g)"), (conv - prod).camax(), 0.0, 1e-6));
        Ok(recs)
    });
    for r in rows {
        for rec in r? {
            out.push(rec);
        }
    }
    let mut rng = rng_for(c, u64::MAX);
    let gen = c.generator_or_random(&mut rng)?;
    let dec = gen.decompose()?;
    for g in [-2.0, 1.0] {
        let pk = multiplier::power_kernel(g, 1e-6)?;
        let err = (pk.transfer(&dec)? - dec.imaginary_power(g)?).camax();
        out.push(Record::le(format!("power kernel γ={g} reproduces (−A)^{{iγ}}"), err, 0.0, 1e-3));
    }
    Ok(())
}

fn random_family(rng: &mut ChaCha8Rng, count: usize, d: usize, diagonal: bool) -> Vec<DMatrix<Complex64>> {
    (0..count)
        .map(|_| {
            if diagonal {
                DMatrix::from_fn(d, d, |i, j| if i == j { Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) } else { Complex64::new(0.0, 0.0) })
            } else {
                random::complex(rng, d, d)
            }
        })
        .collect()
}

fn square_suite(c: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let trials = c.trials(6);
    let seed = c.seed()?;
    let ps = c.ps(&[1.5, 2.0, 3.0])?;
    for t in 0..trials {
        let mut rng = rng_for(c, t as u64);
        let p = ps[t % ps.len()];
        let gen = if c.generator.is_some() { c.generator_or_random(&mut rng)? } else { random::generator(&mut rng, 2 + t % 4) };
        let dec = gen.decompose()?;
        let kernels: Vec<TimeKernel> = (0..2 + t % 2).map(|_| random::smooth_kernel(&mut rng, 0.05)).collect();
        let mut fs: Vec<Vec<Complex64>> = (0..8)
            .map(|_| (0..dec.n()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect())
            .collect();
        fs.extend((0..dec.n()).map(|k| dec.eigenvectors.column(k).iter().map(|&x| Complex64::new(x, 0.0)).collect()));
        let sq = transference::square_transfer_check(&kernels, &dec, p, &fs)?;
        out.push(Record::le(format!("trial {t} p={p}: square function ≤ M·C_p/c_p"), sq.lhs, sq.bound, 1e-9));

        let d = 2 + t % 3;
        let mu = random::weights(&mut rng, d);
        let ops = random_family(&mut rng, 2 + t % 3, d, false);
        let r = transference::row_khinchin_check(&ops, p, &mu, par::derive_seed(seed, t as u64))?;
        out.push(Record::le(format!("trial {t} p={p}: c_p ‖m‖ ≤ square norm"), r.c_p * r.row_norm, r.square_norm, 1e-9));
        out.push(Record::le(format!("trial {t} p={p}: square norm ≤ C_p ‖m‖"), r.square_norm, r.big_c_p * r.row_norm, 1e-9));
    }
    Ok(())
}

fn maximal_suite(c: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let trials = c.trials(10);
    let window = c.window.unwrap_or(192);
    let ps = c.ps(&[1.5, 2.0, 3.0])?;
    let seed = c.seed()?;
    let rows = par::map_range(trials, |t| -> Result<Vec<Record>> {
        let mut rng = rng_for(c, t as u64);
        let p = ps[t % ps.len()];
        let gen = if c.generator.is_some() { c.generator_or_random(&mut rng)? } else { gapped_generator(&mut rng, 2 + t % 4)? };
        let dec = gen.decompose()?;
        let kernels = maximal_family(&mut rng, t);
        let m = transference::maximal_transfer_check(&kernels, &dec, p, window, par::derive_seed(seed, t as u64))?;
        Ok(vec![
            Record::le(format!("trial {t} p={p}: semigroup maximal constant ≤ grid constant"), m.m_semigroup, m.m_grid, 1e-6),
            Record::le(format!("trial {t} p={p}: grid constant ≤ ‖max_i |c_i|‖₁"), m.m_grid, m.grid_upper, 1e-9),
        ])
    });
    for r in rows {
        for rec in r? {
            out.push(rec);
        }
    }
    let mut rng = rng_for(c, u64::MAX);
    let gen = conservative_version(&c.generator_or_random(&mut rng)?)?;
    let dec = gen.decompose()?;
    for &p in &ps {
        let m = calculus::ergodic_maximal(&dec, &vec![1.0; gen.n()], p, &log_times())?;
        out.push(Record::eq(format!("p={p}: ergodic maximal ratio of a constant on a conservative generator"), m.ratio, 1.0, 1e-12));
    }
    Ok(())
}

/// Random generator shifted by `−I/2`, so every mode decays at rate `≥ 1/2`.
pub fn gapped_generator(rng: &mut ChaCha8Rng, n: usize) -> Result<SubmarkovianGenerator> {
    let g = random::generator(rng, n);
    SubmarkovianGenerator::new(g.mu.clone(), &g.a - DMatrix::identity(n, n) * 0.5)
}

/// Kernel family on the step-0.2 grid: averages `(1/t)1_{[0,t]}` on even
/// trials, smooth bumps on odd ones.
pub fn maximal_family(rng: &mut ChaCha8Rng, trial: usize) -> Vec<TimeKernel> {
    let h = 0.2;
    if trial.is_multiple_of(2) {
        [0.2, 0.6, 1.4, 3.0, 6.0].iter().map(|&t| TimeKernel::average(h, t).expect("positive")).collect()
    } else {
        (0..3).map(|_| random::smooth_kernel(rng, h)).collect()
    }
}

fn mellin_suite(c: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let steps = c.steps.unwrap_or(2000);
    let thetas = [PI / 6.0, PI / 4.0, PI / 3.0];
    let tol = c.tol(1e-6);
    for id in [MellinIdentity::Exponential, MellinIdentity::Average] {
        let label = if id == MellinIdentity::Exponential { "exponential" } else { "average" };
        for &theta in &thetas {
            let cut = multiplier::default_gamma_cut(id, theta, 1e-12);
            for t in [0.5, 1.0, 2.0] {
                for x in [-0.5, -1.0, -2.0] {
                    let r = if id == MellinIdentity::Exponential {
                        multiplier::mellin_identity_residual(t, theta, x, cut, steps)?
                    } else {
                        multiplier::mellin_average_residual(t, theta, x, cut, steps)?
                    };
                    out.push(Record::le(format!("{label} t={t} θ={theta:.6} x={x}: residual"), r.residual, 0.0, tol));
                    if t == 1.0 && x == -1.0 {
                        out.push(Record::le(
                            format!("{label} θ={theta:.6}: majorant constant"),
                            r.majorant_constant,
                            multiplier::melest_constant_bound(id, theta),
                            1e-9,
                        ));
                    }
                }
            }
            let res = multiplier::mellin_convergence(id, 1.0, theta, -1.0, cut, 64, 6)?;
            let floor = 1e-11;
            for (l, w) in res.windows(2).enumerate() {
                if w[0] > floor && w[1] > floor {
                    out.push(Record::le(format!("{label} θ={theta:.6}: 3·r(h/2) ≤ r(h) at level {l}"), 3.0 * w[1], w[0], 0.0));
                }
            }
            out.table(format!("{label} θ={theta:.6} convergence"), &res);
        }
    }
    Ok(())
}

fn mihlin_suite(c: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let thetas = if c.angles.is_empty() { vec![PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0] } else { c.angles.clone() };
    let grid = LogGrid::default();
    for &theta in &thetas {
        let mut symbols: Vec<(String, ConeSymbol)> = vec![
            ("1".into(), ConeSymbol::constant(theta, Complex64::new(1.0, 0.0))?),
            ("e^{-z}".into(), ConeSymbol::exponential(theta)?),
            ("z/(1+z)".into(), ConeSymbol::resolvent(theta)?),
        ];
        for g in [-3.0, -1.5, 0.5, 1.0, 3.0] {
            symbols.push((format!("z^{{i·{g}}}"), ConeSymbol::power(theta, g)?));
        }
        let psi = theta / 2.0;
        for (name, m) in &symbols {
            let r = multiplier::mihlin_constants(&multiplier::boundary_restriction(m, psi, &grid)?)?;
            let bound = multiplier::cauchy_cone_bound(m.sup_bound, theta, psi)?;
            out.push(Record::le(format!("{name} θ={theta:.6}: sampled |m| ≤ M_θ"), m.bound_violation() + m.sup_bound, m.sup_bound, 1e-9));
            out.push(Record::le(format!("{name} θ={theta:.6}: C0 ≤ M_θ/sin(θ−ψ)"), r.c0, bound, 1e-6));
            out.push(Record::le(format!("{name} θ={theta:.6}: C1 ≤ M_θ/sin(θ−ψ)"), r.c1, bound, 1e-6));
        }
    }
    Ok(())
}

fn gamma_suite(c: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let mut rng = rng_for(c, 0);
    let points: Vec<Complex64> = (0..c.trials(1000))
        .map(|_| Complex64::new(rng.random_range(-10.0..10.0), rng.random_range(-30.0..30.0)))
        .collect();
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm();
    let mut rec: f64 = 0.0;
    let mut refl: f64 = 0.0;
    for &z in &points {
        rec = rec.max(rel(complex_gamma(z + 1.0)?, z * complex_gamma(z)?));
        let lhs = complex_gamma(z)? * complex_gamma(1.0 - z)? * (z * PI).sin();
        refl = refl.max(rel(lhs, Complex64::new(PI, 0.0)));
    }
    out.push(Record::le("Γ(z+1) = zΓ(z), max relative error", rec, 0.0, 1e-11));
    out.push(Record::le("Γ(z)Γ(1−z) sin πz = π, max relative error", refl, 0.0, 1e-11));
    let gi = complex_gamma(Complex64::new(0.0, 1.0))?.norm();
    out.push(Record::eq("|Γ(i)| against (π / sinh π)^{1/2}", gi, (PI / PI.sinh()).sqrt(), 1e-10));
    Ok(())
}

fn khinchin_suite(c: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let seed = c.seed()?;
    let trials = c.trials(200);
    let depth = c.n.unwrap_or(10);
    for (i, &p) in c.ps(&[1.0, 1.5, 2.0, 3.0, 4.0])?.iter().enumerate() {
        let (cp, big) = transference::khinchin_constants(p);
        let e = transference::khinchin_empirical(p, depth, par::derive_seed(seed, i as u64), trials)?;
        if p == 2.0 {
            out.push(Record::eq("p=2: c_est = 1", e.c_est, 1.0, 1e-12));
            out.push(Record::eq("p=2: C_est = 1", e.big_c_est, 1.0, 1e-12));
        }
        out.push(Record::le(format!("p={p}: c_p ≤ c_est"), cp, e.c_est, 1e-12));
        out.push(Record::le(format!("p={p}: c_est ≤ 1"), e.c_est, 1.0, 1e-12));
        out.push(Record::le(format!("p={p}: 1 ≤ C_est"), 1.0, e.big_c_est, 1e-12));
        out.push(Record::le(format!("p={p}: C_est ≤ C_p"), e.big_c_est, big, 1e-12));
        if p > 1.0 {
            let pr = transference::rademacher_projection_check(p, 4, 3, 500, par::derive_seed(seed, 100 + i as u64))?;
            out.push(Record::le(format!("p={p}: ‖P_n F‖/‖F‖ ≤ max(1/c_p, 1/c_q)"), pr.max_ratio, pr.bound, 1e-9));
        }
    }
    let mut rng = rng_for(c, 1);
    for t in 0..5 {
        let d = 2 + t % 3;
        let mu = random::weights(&mut rng, d);
        let ops = random_family(&mut rng, 2 + t % 3, d, false);
        let (row, sq) = transference::row_khinchin_exact_p2(&ops, &mu)?;
        out.push(Record::eq(format!("family {t}: p=2 row norm = square norm"), row, sq, 1e-9));
        let diag = random_family(&mut rng, 2 + t % 5, d, true);
        let (kp, dn) = transference::symmetric_exact_p2(&diag, &mu)?;
        out.push(Record::eq(format!("family {t}: p=2 ‖K′‖ = ‖k‖_[2]"), kp, dn, 1e-8));
    }
    Ok(())
}

fn vn_suite(c: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let trials = c.trials(200);
    let rows = par::map_range(trials, |t| -> Result<Record> {
        let mut rng = rng_for(c, t as u64);
        let n = 2 + t % 5;
        let m = random::contraction(&mut rng, n);
        let deg = 1 + t % 6;
        let coeffs: Vec<Complex64> = (0..=deg).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let v = calculus::von_neumann_check(&m, &coeffs)?;
        Ok(Record::le(format!("trial {t}: ‖p(T)‖ ≤ sup_|z|=1 |p(z)|"), v.lhs, v.rhs, 1e-9))
    });
    for r in rows {
        out.push(r?);
    }
    Ok(())
}
