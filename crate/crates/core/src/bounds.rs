//! Bound formulas evaluated at concrete parameters, and per-instance reports
//! comparing them with exact and greedy code sizes.

use std::fmt;
use std::io::Write;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::counting::{self, Nat};
use crate::error::{Error, Result};
use crate::graph::{self, Budgets, EpsStar, OrderPolicy, PowerGraphSpec};
use crate::space::{ParamsSpec, SrkParams};

/// Sphere-covering bound `⌈|V| / V(d − 1)⌉` on the largest code with
/// minimum distance `d`.
pub fn gv_lower(params: &SrkParams, d: usize) -> Result<Nat> {
    let (num, den) = gv_ratio(params, d)?;
    Ok(Integer::div_ceil(&num, &den))
}

/// `|V|` and `V(d − 1)` (the unreduced quotient).
pub fn gv_ratio(params: &SrkParams, d: usize) -> Result<(Nat, Nat)> {
    if d == 0 {
        return Err(Error::Precondition("minimum distance d must be at least 1".into()));
    }
    Ok((counting::space_size(params), counting::ball_volume(params, d - 1)))
}

fn log2_nat(x: &Nat) -> f64 {
    counting::ln_nat(x) / std::f64::consts::LN_2
}

/// Independence-number lower bound for a `D`-regular graph on `|V|` vertices
/// with `Δ` triangles: `|V|/(10D) · (log₂ D − ½ log₂(Δ/|V|))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AksValue {
    pub value: f64,
    /// Set when `Δ = 0`; the logarithmic correction is dropped.
    pub triangle_free: bool,
}

pub fn aks_alpha_lower(num_vertices: &Nat, d: &Nat, delta: &Nat) -> Result<AksValue> {
    if d.is_zero() {
        return Err(Error::Precondition("AKS bound needs D >= 1".into()));
    }
    if num_vertices.is_zero() {
        return Err(Error::Precondition("AKS bound needs a nonempty graph".into()));
    }
    let scale = (counting::ln_nat(num_vertices) - counting::ln_nat(d)).exp() / 10.0;
    let log_d = log2_nat(d);
    if delta.is_zero() {
        return Ok(AksValue { value: scale * log_d, triangle_free: true });
    }
    let log_ratio = log2_nat(delta) - log2_nat(num_vertices);
    Ok(AksValue { value: scale * (log_d - 0.5 * log_ratio), triangle_free: false })
}

/// `ε|V|/(20D) · log₂ D` for a caller-chosen `0 < ε ≤ 2`.
pub fn improved_gv_value(eps: f64, num_vertices: &Nat, d: &Nat) -> Result<f64> {
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(Error::Precondition(format!("epsilon must lie in (0, 2], got {eps}")));
    }
    if d.is_zero() {
        return Err(Error::Precondition("improved GV value needs D >= 1".into()));
    }
    let scale = (counting::ln_nat(num_vertices) - counting::ln_nat(d)).exp() / 20.0;
    Ok(eps * scale * log2_nat(d))
}

/// A report field that may have been skipped for budget or applicability
/// reasons.
#[derive(Clone, Debug, PartialEq)]
pub enum Field<T> {
    Value(T),
    NotComputed,
    NotApplicable,
}

impl<T> Field<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Field::Value(v) => Some(v),
            _ => None,
        }
    }

    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(v) => Field::Value(v),
            Err(Error::BudgetExceeded { .. }) => Field::NotComputed,
            Err(_) => Field::NotApplicable,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Field<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Value(v) => v.fmt(f),
            Field::NotComputed => f.write_str("not computed"),
            Field::NotApplicable => f.write_str("n/a"),
        }
    }
}

impl<T: fmt::Display> Serialize for Field<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    pub budgets: Budgets,
    pub order: OrderPolicy,
    /// Optional ε for the improved GV expression.
    pub eps: Option<f64>,
    pub compute_alpha: bool,
}

impl ReportOptions {
    pub fn new(budgets: Budgets) -> Self {
        ReportOptions { budgets, order: OrderPolicy::Lex, eps: None, compute_alpha: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionSummary {
    pub num_classes: usize,
    pub avg_size: f64,
    pub min_class_distance: Option<usize>,
}

impl fmt::Display for PartitionSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} classes, average {:.6}", self.num_classes, self.avg_size)
    }
}

/// Every bound and exact value for one `(params, d)` instance.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub params: ParamsSpec,
    pub d: usize,
    pub num_vertices: String,
    pub ball: String,
    pub gv: String,
    /// `|V| / V(d−1)` reduced, as `"num/den"`.
    pub gv_exact_ratio: String,
    #[serde(skip)]
    pub gv_value: Nat,
    #[serde(skip)]
    pub gv_floor_ratio: Nat,
    pub greedy_code_size: Field<usize>,
    pub exact_alpha: Field<usize>,
    pub partition: Field<PartitionSummary>,
    #[serde(rename = "D")]
    pub degree: Field<String>,
    #[serde(rename = "T")]
    pub t: Field<String>,
    #[serde(rename = "Delta")]
    pub delta: Field<String>,
    pub eps_star: Field<EpsStar>,
    pub aks_lower: Field<f64>,
    pub aks_triangle_free: bool,
    pub improved_gv: Field<f64>,
}

/// Builds the report for minimum distance `d`. Sub-results that exceed their
/// budget are recorded as "not computed" instead of failing the report.
pub fn bound_report(params: &SrkParams, d: usize, options: &ReportOptions) -> Result<BoundReport> {
    let (num, den) = gv_ratio(params, d)?;
    let g = num.gcd(&den);
    let gv_value = Integer::div_ceil(&num, &den);
    let k = d - 1;
    let spec = PowerGraphSpec::new(params.clone(), k);
    let budgets = &options.budgets;

    let greedy = Field::from_result(graph::greedy_gv_code(&spec, options.order, budgets).map(|c| c.len()));
    let exact_alpha = if options.compute_alpha {
        Field::from_result(graph::max_independent_set(&spec, budgets).map(|r| r.size))
    } else {
        Field::NotComputed
    };
    let partition = Field::from_result(graph::greedy_partition(&spec, options.order, budgets).map(|classes| {
        let total: usize = classes.iter().map(|c| c.len()).sum();
        PartitionSummary {
            num_classes: classes.len(),
            avg_size: total as f64 / classes.len() as f64,
            min_class_distance: classes.iter().filter_map(|c| c.cached_min_distance()).min(),
        }
    }));

    let (mut degree, mut t, mut delta, mut eps_star) =
        (Field::NotApplicable, Field::NotApplicable, Field::NotApplicable, Field::NotApplicable);
    let (mut aks_lower, mut aks_triangle_free, mut improved_gv) = (Field::NotApplicable, false, Field::NotApplicable);
    if k >= 1 {
        let deg = counting::degree(params, k)?;
        degree = Field::Value(deg.to_string());
        if let Some(eps) = options.eps {
            improved_gv = Field::from_result(improved_gv_value(eps, &num, &deg));
        }
        match graph::graph_stats(&spec, budgets) {
            Ok(stats) => {
                t = Field::Value(stats.t.to_string());
                delta = Field::Value(stats.delta.to_string());
                eps_star = Field::Value(stats.eps_star);
                let aks = aks_alpha_lower(&stats.num_vertices, &stats.d, &stats.delta)?;
                aks_lower = Field::Value(aks.value);
                aks_triangle_free = aks.triangle_free;
            }
            Err(Error::BudgetExceeded { .. }) => {
                t = Field::NotComputed;
                delta = Field::NotComputed;
                eps_star = Field::NotComputed;
                aks_lower = Field::NotComputed;
            }
            Err(e) => return Err(e),
        }
    }

    Ok(BoundReport {
        params: params.to_spec(),
        d,
        num_vertices: num.to_string(),
        ball: den.to_string(),
        gv: gv_value.to_string(),
        gv_exact_ratio: format!("{}/{}", &num / &g, &den / &g),
        gv_floor_ratio: &num / &den,
        gv_value,
        greedy_code_size: greedy,
        exact_alpha,
        partition,
        degree,
        t,
        delta,
        eps_star,
        aks_lower,
        aks_triangle_free,
        improved_gv,
    })
}

pub const CSV_COLUMNS: [&str; 18] = [
    "q", "p", "e", "n", "m", "d", "V", "ball", "gv", "greedy", "alpha", "classes", "avg_class", "D", "T", "Delta",
    "eps_star", "aks",
];

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl BoundReport {
    pub fn csv_record(&self) -> Vec<String> {
        let (classes, avg) = match &self.partition {
            Field::Value(p) => (p.num_classes.to_string(), format!("{:.6}", p.avg_size)),
            other => (other.to_string(), other.to_string()),
        };
        let aks = match &self.aks_lower {
            Field::Value(v) => format!("{v:.6}"),
            other => other.to_string(),
        };
        let field = crate::gf::factor_prime_power(self.params.q).unwrap_or((self.params.q, 1));
        vec![
            self.params.q.to_string(),
            field.0.to_string(),
            field.1.to_string(),
            join(&self.params.n),
            join(&self.params.m),
            self.d.to_string(),
            self.num_vertices.clone(),
            self.ball.clone(),
            self.gv.clone(),
            self.greedy_code_size.to_string(),
            self.exact_alpha.to_string(),
            classes,
            avg,
            self.degree.to_string(),
            self.t.to_string(),
            self.delta.to_string(),
            self.eps_star.to_string(),
            aks,
        ]
    }
}

/// Writes the fixed-column CSV table (header always present).
pub fn write_csv<W: Write>(out: W, reports: &[BoundReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in reports {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(mut out: W, reports: &[BoundReport]) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, reports)?;
    writeln!(out)?;
    Ok(())
}
