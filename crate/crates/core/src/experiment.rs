//! Experiment configuration, runners and reports.
//!
//! A config is flat `key = value` text. Rationals are written `num/den` and
//! infinity as `inf`, so every parameter survives a round trip exactly.
//!
//! ```
//! use microwidth::experiment::ExperimentConfig;
//!
//! let cfg: ExperimentConfig = "p1 = 2\np2 = 2\ndelta = 6/5\ns_prime = 1\nmodel = facecube\nm = 1\nn = 2\n"
//!     .parse()
//!     .unwrap();
//! assert_eq!(cfg.to_string().parse::<ExperimentConfig>().unwrap(), cfg);
//! ```

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::bounds::{fit_slope, geometric_grid, lower_curve, upper_curve, BoundCurve, CurveRole, Scheme};
use crate::catalog::{diagonal_snumbers, CatalogOptions};
use crate::dset::DSetModel;
use crate::error::{Error, Result};
use crate::params::{is_compact, EmbeddingParams};
use crate::partition::{count_model, count_n_with_cap, BlockPartition, DEFAULT_CAP};
use crate::rate::{compare_widths, rate, RateKind, RateResult, WidthKind};
use crate::rational::{format_rational, parse_rational, q, qi, to_f64, Exponent, Q};
use crate::seqspace::as_diagonal_top;

/// Which d-set the experiment runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    /// The origin of `ℝⁿ`.
    Point,
    FaceCube { m: u32 },
    Cantor { theta: Q, m: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub p1: Exponent,
    pub p2: Exponent,
    pub q1: Exponent,
    pub q2: Exponent,
    pub delta: Q,
    pub s_prime: Q,
    pub n: u32,
    pub model: ModelSpec,
    /// Rational dimension used by the decision tables; required to be set
    /// by hand only when the model's dimension is irrational.
    pub d: Option<Q>,
    pub j_max: u32,
    pub i_max: u32,
    pub k_min: u64,
    pub k_max: u64,
    pub points: usize,
    pub scheme: Scheme,
    pub width: WidthKind,
    pub tolerance: f64,
    pub lambda: Q,
    /// Also run at `J + 2, I + 2` and require the slopes to agree within 0.02.
    pub saturation: bool,
    pub cap: u64,
    /// Synthetic power-law exponent for the self-test mode of `verify`.
    pub selftest: Option<Q>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let two = Exponent::Finite(qi(2));
        ExperimentConfig {
            p1: two,
            p2: two,
            q1: two,
            q2: two,
            delta: qi(1),
            s_prime: qi(1),
            n: 2,
            model: ModelSpec::FaceCube { m: 1 },
            d: None,
            j_max: 8,
            i_max: 8,
            k_min: 16,
            k_max: 4096,
            points: 24,
            scheme: Scheme::Greedy,
            width: WidthKind::Approximation,
            tolerance: 0.07,
            lambda: q(1, 2),
            saturation: false,
            cap: DEFAULT_CAP,
            selftest: None,
        }
    }
}

fn bad(key: &str, v: &str) -> Error {
    Error::Parse(format!("bad value {v:?} for {key}"))
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| bad(key, v))
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut seen = std::collections::BTreeSet::new();
        let (mut model, mut m, mut theta) = (None::<String>, None::<u32>, None::<Q>);
        let (mut q1_set, mut q2_set) = (false, false);
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", no + 1)))?;
            let (key, v) = (key.trim(), v.trim());
            if !seen.insert(key.to_string()) {
                return Err(Error::Parse(format!("duplicate key {key}")));
            }
            match key {
                "p1" => cfg.p1 = v.parse()?,
                "p2" => cfg.p2 = v.parse()?,
                "q1" => {
                    cfg.q1 = v.parse()?;
                    q1_set = true;
                }
                "q2" => {
                    cfg.q2 = v.parse()?;
                    q2_set = true;
                }
                "delta" => cfg.delta = parse_rational(v)?,
                "s_prime" => cfg.s_prime = parse_rational(v)?,
                "n" => cfg.n = parse_num(key, v)?,
                "model" => model = Some(v.to_string()),
                "m" => m = Some(parse_num(key, v)?),
                "theta" => theta = Some(parse_rational(v)?),
                "d" => cfg.d = Some(parse_rational(v)?),
                "j_max" => cfg.j_max = parse_num(key, v)?,
                "i_max" => cfg.i_max = parse_num(key, v)?,
                "k_min" => cfg.k_min = parse_num(key, v)?,
                "k_max" => cfg.k_max = parse_num(key, v)?,
                "points" => cfg.points = parse_num(key, v)?,
                "scheme" => cfg.scheme = v.parse()?,
                "width" => cfg.width = v.parse()?,
                "tolerance" => cfg.tolerance = parse_num(key, v)?,
                "lambda" => cfg.lambda = parse_rational(v)?,
                "saturation" => cfg.saturation = parse_num(key, v)?,
                "cap" => cfg.cap = parse_num(key, v)?,
                "selftest" => cfg.selftest = if v == "none" { None } else { Some(parse_rational(v)?) },
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        if !q1_set {
            cfg.q1 = cfg.p1;
        }
        if !q2_set {
            cfg.q2 = cfg.p2;
        }
        cfg.model = match model.as_deref().unwrap_or("facecube") {
            "point" => ModelSpec::Point,
            "facecube" => ModelSpec::FaceCube { m: m.unwrap_or(1) },
            "cantor" => ModelSpec::Cantor {
                theta: theta.unwrap_or(q(1, 3)),
                m: m.unwrap_or(0),
            },
            other => return Err(bad("model", other)),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p1 = {}", self.p1)?;
        writeln!(f, "p2 = {}", self.p2)?;
        writeln!(f, "q1 = {}", self.q1)?;
        writeln!(f, "q2 = {}", self.q2)?;
        writeln!(f, "delta = {}", format_rational(&self.delta))?;
        writeln!(f, "s_prime = {}", format_rational(&self.s_prime))?;
        writeln!(f, "n = {}", self.n)?;
        match self.model {
            ModelSpec::Point => writeln!(f, "model = point")?,
            ModelSpec::FaceCube { m } => writeln!(f, "model = facecube\nm = {m}")?,
            ModelSpec::Cantor { theta, m } => {
                writeln!(f, "model = cantor\nm = {m}\ntheta = {}", format_rational(&theta))?
            }
        }
        if let Some(d) = self.d {
            writeln!(f, "d = {}", format_rational(&d))?;
        }
        writeln!(f, "j_max = {}", self.j_max)?;
        writeln!(f, "i_max = {}", self.i_max)?;
        writeln!(f, "k_min = {}", self.k_min)?;
        writeln!(f, "k_max = {}", self.k_max)?;
        writeln!(f, "points = {}", self.points)?;
        writeln!(f, "scheme = {}", self.scheme)?;
        writeln!(f, "width = {}", self.width)?;
        writeln!(f, "tolerance = {:?}", self.tolerance)?;
        writeln!(f, "lambda = {}", format_rational(&self.lambda))?;
        writeln!(f, "saturation = {}", self.saturation)?;
        writeln!(f, "cap = {}", self.cap)?;
        match self.selftest {
            Some(e) => writeln!(f, "selftest = {}", format_rational(&e)),
            None => writeln!(f, "selftest = none"),
        }
    }
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if self.k_min == 0 || self.k_min > self.k_max {
            return Err(Error::InvalidParameter("need 1 <= k_min <= k_max".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::InvalidParameter("tolerance must be nonnegative".into()));
        }
        self.dset()?;
        self.params()?;
        Ok(())
    }

    pub fn dset(&self) -> Result<DSetModel> {
        match self.model {
            ModelSpec::Point => Ok(DSetModel::point(vec![0.0; self.n as usize])),
            ModelSpec::FaceCube { m } => DSetModel::face_cube(m, self.n),
            ModelSpec::Cantor { theta, m } => DSetModel::cantor_product(theta, m, self.n),
        }
    }

    /// Dimension fed to the decision tables. An irrational dimension is
    /// rounded to three decimals unless `d` is given.
    pub fn dimension(&self) -> Result<Q> {
        if let Some(d) = self.d {
            return Ok(d);
        }
        let u = self.dset()?;
        Ok(u.d_exact.unwrap_or_else(|| Ratio::new((u.d * 1000.0).round() as i128, 1000)))
    }

    pub fn params(&self) -> Result<EmbeddingParams> {
        let mut p =
            EmbeddingParams::from_exponents(self.p1, self.p2, self.q1, self.q2, self.delta, self.s_prime, self.dimension()?, self.n)?;
        p = p.with_q(self.q1, self.q2);
        Ok(p)
    }

    pub fn catalog(&self) -> CatalogOptions {
        CatalogOptions { lambda: self.lambda }
    }

    pub fn partition(&self) -> Result<BlockPartition> {
        BlockPartition::with_cap(&self.dset()?, self.j_max, self.i_max, self.cap)
    }

    pub fn k_grid(&self) -> Vec<u64> {
        geometric_grid(self.k_min, self.k_max, self.points)
    }
}

/// Key-value summary plus named CSV tables.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Report {
    pub command: String,
    /// `Some(false)` is a verification failure.
    pub passed: Option<bool>,
    pub entries: Vec<(String, String)>,
    /// `(file name, csv text)`.
    pub tables: Vec<(String, String)>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            ..Default::default()
        }
    }

    fn put(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn table(&self, name: &str) -> Option<&str> {
        self.tables.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }

    /// Human-readable summary without the tables.
    pub fn summary(&self) -> String {
        let mut s = format!("command = {}\n", self.command);
        let status = match self.passed {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "done",
        };
        s.push_str(&format!("status = {status}\n"));
        for (k, v) in &self.entries {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = self.summary();
        for (name, csv) in &self.tables {
            s.push_str(&format!("--- table {name}\n{csv}"));
            if !csv.ends_with('\n') {
                s.push('\n');
            }
            s.push_str("--- end\n");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Report> {
        let mut r = Report::default();
        let mut lines = text.lines();
        while let Some(line) = lines.next() {
            if let Some(name) = line.strip_prefix("--- table ") {
                let mut csv = String::new();
                loop {
                    match lines.next() {
                        Some("--- end") => break,
                        Some(l) => {
                            csv.push_str(l);
                            csv.push('\n');
                        }
                        None => return Err(Error::Parse(format!("unterminated table {name}"))),
                    }
                }
                r.tables.push((name.to_string(), csv));
                continue;
            }
            let (k, v) = line
                .split_once(" = ")
                .ok_or_else(|| Error::Parse(format!("bad report line {line:?}")))?;
            match k {
                "command" => r.command = v.to_string(),
                "status" => {
                    r.passed = match v {
                        "pass" => Some(true),
                        "fail" => Some(false),
                        "done" => None,
                        _ => return Err(Error::Parse(format!("bad status {v:?}"))),
                    }
                }
                _ => r.entries.push((k.to_string(), v.to_string())),
            }
        }
        Ok(r)
    }
}

fn opt_q(v: &Option<Q>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), format_rational)
}

fn put_rate(r: &mut Report, kind: WidthKind, res: &RateResult) {
    let l = kind.letter();
    r.put(format!("{l}.kind"), res.kind);
    r.put(format!("{l}.kappa"), opt_q(&res.kappa));
    r.put(format!("{l}.kappa_lb"), opt_q(&res.kappa_lb));
    r.put(format!("{l}.kappa_ub"), opt_q(&res.kappa_ub));
    r.put(format!("{l}.case"), res.case_id.as_deref().unwrap_or("-"));
    r.put(format!("{l}.notes"), if res.notes.is_empty() { "-" } else { &res.notes });
}

pub fn run_rate(cfg: &ExperimentConfig) -> Result<Report> {
    let params = cfg.params()?;
    let mut r = Report::new("rate");
    r.put("compact", is_compact(&params));
    for kind in WidthKind::ALL {
        put_rate(&mut r, kind, &rate(kind, &params));
    }
    let rel: Vec<String> = compare_widths(&params).iter().map(|x| x.to_string()).collect();
    r.put("relations", if rel.is_empty() { "-".to_string() } else { rel.join(" ") });
    Ok(r)
}

/// Predicted interval for the decay exponent, `None` when the tables leave
/// the case open.
fn predicted(res: &RateResult) -> Option<(Q, Q)> {
    match res.kind {
        RateKind::Exact => res.kappa.map(|k| (k, k)),
        RateKind::TwoSided => Some((res.kappa_ub?, res.kappa_lb?)),
        _ => None,
    }
}

fn within(slope: f64, range: (Q, Q), tol: f64) -> bool {
    let kappa = -slope;
    kappa >= to_f64(&range.0) - tol && kappa <= to_f64(&range.1) + tol
}

fn check_grid(cfg: &ExperimentConfig, part: &BlockPartition) -> Result<()> {
    let total = part.total_dimension();
    if cfg.k_max > total {
        return Err(Error::InvalidParameter(format!(
            "k_max = {} exceeds the truncated dimension {total}",
            cfg.k_max
        )));
    }
    Ok(())
}

/// Exact s-numbers of the truncated diagonal embedding on the k-grid.
pub fn exact_curve(cfg: &ExperimentConfig, params: &EmbeddingParams, part: &BlockPartition) -> Result<BoundCurve> {
    let top = as_diagonal_top(params, part, cfg.k_max as usize)?;
    let s = diagonal_snumbers(&top)?;
    let points = cfg.k_grid().into_iter().map(|k| (k, s[k as usize - 1])).collect();
    Ok(BoundCurve::new(points, CurveRole::Exact, "oracle"))
}

pub fn run_verify(cfg: &ExperimentConfig) -> Result<Report> {
    let mut r = Report::new("verify");
    r.put("tolerance", format!("{:?}", cfg.tolerance));
    if let Some(e) = cfg.selftest {
        let kappa = to_f64(&e);
        let pts = cfg.k_grid().into_iter().map(|k| (k, 2.0 * (k as f64).powf(-kappa))).collect();
        let curve = BoundCurve::new(pts, CurveRole::Exact, "synthetic");
        let (slope, r2) = fit_slope(&curve, cfg.k_min, cfg.k_max)?;
        r.put("mode", "selftest");
        r.put("predicted", format_rational(&e));
        r.put("slope", format!("{slope:?}"));
        r.put("r2", format!("{r2:?}"));
        r.passed = Some((slope + kappa).abs() < 1e-9);
        return Ok(r);
    }
    let params = cfg.params()?;
    if !is_compact(&params) {
        return Err(Error::InvalidParameter("verify needs a compact embedding".into()));
    }
    let res = rate(cfg.width, &params);
    put_rate(&mut r, cfg.width, &res);
    let part = cfg.partition()?;
    check_grid(cfg, &part)?;
    let range = predicted(&res);
    let mut ok = range.is_some();
    if params.is_diagonal() {
        r.put("mode", "diagonal");
        let curve = exact_curve(cfg, &params, &part)?;
        let (slope, r2) = fit_slope(&curve, cfg.k_min, cfg.k_max)?;
        r.put("slope", format!("{slope:?}"));
        r.put("r2", format!("{r2:?}"));
        ok &= range.is_some_and(|g| within(slope, g, cfg.tolerance));
        if cfg.saturation {
            let wider = ExperimentConfig {
                j_max: cfg.j_max + 2,
                i_max: cfg.i_max + 2,
                ..cfg.clone()
            };
            let part2 = wider.partition()?;
            let (slope2, _) = fit_slope(&exact_curve(&wider, &params, &part2)?, cfg.k_min, cfg.k_max)?;
            r.put("slope_wider", format!("{slope2:?}"));
            ok &= (slope - slope2).abs() < 0.02;
        }
        r.tables.push(("curves.csv".into(), BoundCurve::to_csv(&[curve])));
    } else {
        r.put("mode", "envelope");
        let ks = cfg.k_grid();
        let opts = cfg.catalog();
        let up = upper_curve(&ks, &part, &params, cfg.scheme, cfg.width, &opts)?;
        let lo = lower_curve(&ks, &part, &params, cfg.width, &opts)?;
        let (su, ru) = fit_slope(&up, cfg.k_min, cfg.k_max)?;
        let (sl, rl) = fit_slope(&lo, cfg.k_min, cfg.k_max)?;
        let ordered = up.points.iter().zip(&lo.points).all(|(u, l)| l.1 <= u.1 * (1.0 + 1e-12));
        r.put("slope_upper", format!("{su:?}"));
        r.put("r2_upper", format!("{ru:?}"));
        r.put("slope_lower", format!("{sl:?}"));
        r.put("r2_lower", format!("{rl:?}"));
        r.put("lower_below_upper", ordered);
        ok &= ordered && range.is_some_and(|g| within(su, g, cfg.tolerance) && within(sl, g, cfg.tolerance));
        r.tables.push(("curves.csv".into(), BoundCurve::to_csv(&[up, lo])));
    }
    r.passed = Some(ok);
    Ok(r)
}

/// Range `[c₁, c₂]` of `w / 2^{is'}` over the members of blocks with `i ≥ 1`,
/// from the per-block distance extents.
pub fn weight_sandwich(part: &BlockPartition, s_prime: f64) -> Option<(f64, f64)> {
    let mut out: Option<(f64, f64)> = None;
    for (j, i) in part.block_ids().filter(|b| b.1 >= 1) {
        let Some((lo2, hi2)) = part.extents[j as usize][i as usize] else {
            continue;
        };
        let scale = 2f64.powi(j as i32);
        let norm = 2f64.powf(i as f64 * s_prime);
        let a = (1.0 + scale * lo2.sqrt()).powf(s_prime) / norm;
        let b = (1.0 + scale * hi2.sqrt()).powf(s_prime) / norm;
        let (a, b) = (a.min(b), a.max(b));
        out = Some(out.map_or((a, b), |(c1, c2)| (c1.min(a), c2.max(b))));
    }
    out
}

pub fn run_count(cfg: &ExperimentConfig) -> Result<Report> {
    let u = cfg.dset()?;
    let part = cfg.partition()?;
    let mut r = Report::new("count");
    r.put("model", u.kind);
    r.put("d", format!("{:?}", u.d));
    let mut csv = String::from("j,i,N_ji,M_ji,ratio\n");
    let (mut c1, mut c2) = (f64::INFINITY, 0.0f64);
    for j in 0..=cfg.j_max {
        for i in 0..=cfg.i_max {
            let nji = count_n_with_cap(&u, j, i, cfg.cap)?;
            let mji = if i <= part.i_max { part.size(j, i) } else { 0 };
            let ratio = nji as f64 / count_model(u.n, u.d, j, i);
            if nji > 0 {
                c1 = c1.min(ratio);
                c2 = c2.max(ratio);
            }
            csv.push_str(&format!("{j},{i},{nji},{mji},{ratio:e}\n"));
        }
    }
    if c2 > 0.0 {
        r.put("c1", format!("{c1:e}"));
        r.put("c2", format!("{c2:e}"));
        r.put("spread", format!("{:e}", c2 / c1));
    }
    if let Some((w1, w2)) = weight_sandwich(&part, to_f64(&cfg.s_prime)) {
        r.put("weight_c1", format!("{w1:e}"));
        r.put("weight_c2", format!("{w2:e}"));
    }
    r.tables.push(("counts.csv".into(), csv));
    r.tables.push(("blocks.csv".into(), part.to_csv()?));
    Ok(r)
}

pub fn run_bound(cfg: &ExperimentConfig) -> Result<Report> {
    let params = cfg.params()?;
    if !is_compact(&params) {
        return Err(Error::InvalidParameter("bound needs a compact embedding".into()));
    }
    let part = cfg.partition()?;
    check_grid(cfg, &part)?;
    let ks = cfg.k_grid();
    let opts = cfg.catalog();
    let up = upper_curve(&ks, &part, &params, cfg.scheme, cfg.width, &opts)?;
    let lo = lower_curve(&ks, &part, &params, cfg.width, &opts)?;
    let mut r = Report::new("bound");
    r.put("scheme", cfg.scheme);
    r.put("width", cfg.width);
    for (name, c) in [("upper", &up), ("lower", &lo)] {
        match fit_slope(c, cfg.k_min, cfg.k_max) {
            Ok((s, r2)) => {
                r.put(format!("slope_{name}"), format!("{s:?}"));
                r.put(format!("r2_{name}"), format!("{r2:?}"));
            }
            Err(e) => r.put(format!("slope_{name}"), e),
        }
    }
    r.tables.push(("curves.csv".into(), BoundCurve::to_csv(&[up, lo])));
    Ok(r)
}

/// Exact s-numbers of the diagonal case.
pub fn run_oracle(cfg: &ExperimentConfig) -> Result<Report> {
    let params = cfg.params()?;
    if !params.is_diagonal() {
        return Err(Error::NotDiagonal("oracle".into()));
    }
    let part = cfg.partition()?;
    check_grid(cfg, &part)?;
    let curve = exact_curve(cfg, &params, &part)?;
    let mut r = Report::new("oracle");
    r.put("total_dimension", part.total_dimension());
    if let Some((_, v)) = curve.points.first() {
        r.put("s_k_min", format!("{v:e}"));
    }
    r.tables.push(("oracle.csv".into(), BoundCurve::to_csv(&[curve])));
    Ok(r)
}
