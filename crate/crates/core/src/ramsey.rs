//! Inequality chains between code sizes and set-coloring Ramsey numbers
//! `R(k; r, s)`, evaluated over a user-supplied table of known values.
//!
//! Every result carries its derivation as a list of steps. Each step holds
//! literal inputs, so [`DerivedBound::reevaluate`] can replay it exactly.

use std::fmt;
use std::path::Path;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::bounds::{self, Field};
use crate::counting::{self, Nat};
use crate::error::{Error, Result};
use crate::gf;
use crate::graph::{self, Budgets, PowerGraphSpec};
use crate::space::{ParamsSpec, SrkParams};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseyEntry {
    pub k: u32,
    pub r: u32,
    pub s: u32,
    pub lo: u64,
    pub hi: u64,
    #[serde(default)]
    pub source: String,
}

/// Known bounds `lo ≤ R(k; r, s) ≤ hi`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseyTable {
    pub entries: Vec<RamseyEntry>,
}

impl RamseyTable {
    pub fn validate(&self) -> Result<()> {
        for e in &self.entries {
            if e.lo > e.hi {
                return Err(Error::InvalidParams(format!("R({};{},{}): lo {} exceeds hi {}", e.k, e.r, e.s, e.lo, e.hi)));
            }
            if e.k < 3 || e.s < 1 || e.r <= e.s {
                return Err(Error::InvalidParams(format!(
                    "R({};{},{}): entries need k >= 3 and r > s >= 1",
                    e.k, e.r, e.s
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let table: RamseyTable = serde_json::from_str(text)?;
        table.validate()?;
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, k: u32, r: u32, s: u32) -> Option<&RamseyEntry> {
        self.entries.iter().find(|e| (e.k, e.r, e.s) == (k, r, s))
    }

    /// The exact value of `R(k; r, s)`; errors if absent or only bracketed.
    pub fn exact(&self, k: u32, r: u32, s: u32) -> Result<&RamseyEntry> {
        let e = self.get(k, r, s).ok_or(Error::MissingRamseyEntry { k, r, s })?;
        if e.lo != e.hi {
            return Err(Error::Precondition(format!(
                "R({k};{r},{s}) is only known to lie in [{}, {}]; an exact value is required",
                e.lo, e.hi
            )));
        }
        Ok(e)
    }
}

/// Constants of the existential statements, supplied by the user.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub eps: f64,
    pub c: f64,
    pub c_prime: f64,
    #[serde(default = "default_log_base")]
    pub log_base: f64,
}

fn default_log_base() -> f64 {
    2.0
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig { eps: 0.5, c: 1.0, c_prime: 1.0, log_base: 2.0 }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !(positive(self.eps) && positive(self.c) && positive(self.c_prime)) {
            return Err(Error::InvalidParams("eps, c and c_prime must all be positive".into()));
        }
        if !(positive(self.log_base) && self.log_base != 1.0) {
            return Err(Error::InvalidParams("log_base must be positive and different from 1".into()));
        }
        Ok(())
    }
}

/// A step result: an exact integer or a real number.
#[derive(Clone, Debug)]
pub enum Value {
    Int(Nat),
    Real(f64),
}

impl Value {
    fn int(&self) -> Result<&Nat> {
        match self {
            Value::Int(n) => Ok(n),
            Value::Real(_) => Err(Error::Invariant("expected an integer step value".into())),
        }
    }

    /// Bitwise equality (reals compared by bit pattern).
    pub fn same_as(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Real(a), Value::Real(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Real(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Value::Int(n) => s.serialize_str(&n.to_string()),
            Value::Real(x) if x.is_finite() => s.serialize_f64(*x),
            Value::Real(x) => s.collect_str(x),
        }
    }
}

/// The computation performed by one derivation step, with literal inputs.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum StepOp {
    /// Exact table value `R(k; r, s)`.
    TableLookup { k: u32, r: u32, s: u32, value: u64, source: String },
    /// Alphabet size `q = R − 1`.
    FieldOrder { ramsey_value: u64 },
    /// `⌈|V| / V(d − 1)⌉` on the given space.
    GvLower { params: ParamsSpec, d: usize },
    /// A value taken on trust from the caller.
    Supplied { value: String, description: String },
    /// `code_size + 1`.
    StrictlyAbove { code_size: String },
    /// `log_2` of the cap `2^{c' k (r−s)² / r · log_b(r / min(s, r−s))}`.
    RamseyCapExponent { c_prime: f64, k: u32, r: u32, s: u32, log_base: f64 },
    /// `j = (1 − q^{−m'}) t − d + 1`.
    CorollaryShift { q: u32, m_min: usize, t: usize, d: usize },
    /// `⌈d − c j⌉`.
    ShiftedDistance { d: usize, c: f64, j: f64 },
    /// `max((1 + ε) A, ε d)`.
    UpperMax { eps: f64, code_size: String, d: usize },
}

fn parse_nat(s: &str) -> Result<Nat> {
    s.parse::<Nat>().map_err(|_| Error::Invariant(format!("malformed integer {s:?} in derivation")))
}

impl StepOp {
    pub fn evaluate(&self) -> Result<Value> {
        Ok(match self {
            StepOp::TableLookup { value, .. } => Value::Int(Nat::from(*value)),
            StepOp::FieldOrder { ramsey_value } => {
                if *ramsey_value < 2 {
                    return Err(Error::Precondition("R(k;a,b) - 1 must be at least 1".into()));
                }
                Value::Int(Nat::from(ramsey_value - 1))
            }
            StepOp::GvLower { params, d } => Value::Int(bounds::gv_lower(&params.build()?, *d)?),
            StepOp::Supplied { value, .. } => Value::Int(parse_nat(value)?),
            StepOp::StrictlyAbove { code_size } => Value::Int(parse_nat(code_size)? + 1u32),
            StepOp::RamseyCapExponent { c_prime, k, r, s, log_base } => {
                let (r, s) = (*r as f64, *s as f64);
                let inner = r / s.min(r - s);
                Value::Real(c_prime * *k as f64 * (r - s) * (r - s) / r * (inner.ln() / log_base.ln()))
            }
            StepOp::CorollaryShift { q, m_min, t, d } => {
                let frac = 1.0 - (*q as f64).powi(-(*m_min as i32));
                Value::Real(frac * *t as f64 - *d as f64 + 1.0)
            }
            StepOp::ShiftedDistance { d, c, j } => Value::Real((*d as f64 - c * j).ceil()),
            StepOp::UpperMax { eps, code_size, d } => {
                let a = counting_to_f64(&parse_nat(code_size)?);
                Value::Real(((1.0 + eps) * a).max(eps * *d as f64))
            }
        })
    }
}

fn counting_to_f64(n: &Nat) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

#[derive(Clone, Debug, Serialize)]
pub struct Step {
    pub theorem: String,
    pub anchor: String,
    #[serde(flatten)]
    pub op: StepOp,
    pub output: Value,
}

impl Step {
    fn run(theorem: &str, anchor: &str, op: StepOp) -> Result<Step> {
        let output = op.evaluate()?;
        Ok(Step { theorem: theorem.into(), anchor: anchor.into(), op, output })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Target {
    Ramsey { k: u32, r: u32, s: u32 },
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Ramsey { k, r, s } => write!(f, "R({k};{r},{s})"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivedBound {
    pub target: Target,
    pub kind: BoundKind,
    pub value: Value,
    /// Human-readable summary such as `R(3;4,2) ≥ 4`.
    pub statement: String,
    pub derivation: Vec<Step>,
    /// Hypotheses that were not met or values that were rounded.
    pub flags: Vec<String>,
    /// Auxiliary real-valued quantities reported next to the bound.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<(String, Value)>,
}

impl DerivedBound {
    fn new(target: Target, kind: BoundKind, derivation: Vec<Step>, flags: Vec<String>) -> Result<Self> {
        let value = derivation
            .iter()
            .rev()
            .find(|s| !matches!(s.op, StepOp::RamseyCapExponent { .. }))
            .map(|s| s.output.clone())
            .ok_or_else(|| Error::Invariant("empty derivation".into()))?;
        let rel = match kind {
            BoundKind::Lower => "≥",
            BoundKind::Upper => "≤",
        };
        let statement = format!("{target} {rel} {value}");
        Ok(DerivedBound { target, kind, value, statement, derivation, flags, notes: Vec::new() })
    }

    /// Replays every step from its recorded inputs and checks that each
    /// output, and the final value, come out bit-for-bit identical.
    pub fn reevaluate(&self) -> Result<Value> {
        let mut last = None;
        for (i, step) in self.derivation.iter().enumerate() {
            let out = step.op.evaluate()?;
            if !out.same_as(&step.output) {
                return Err(Error::Invariant(format!(
                    "step {i} ({}) replays to {out}, recorded {}",
                    step.theorem, step.output
                )));
            }
            if !matches!(step.op, StepOp::RamseyCapExponent { .. }) {
                last = Some(out);
            }
        }
        let last = last.ok_or_else(|| Error::Invariant("empty derivation".into()))?;
        if !last.same_as(&self.value) {
            return Err(Error::Invariant(format!("derivation ends at {last}, recorded value {}", self.value)));
        }
        Ok(last)
    }
}

const HAMMING_THEOREM: &str = "Hamming codes bound set-coloring Ramsey numbers";
const HAMMING_ANCHOR: &str = "A_q(N,d) < R(k;Na,db) for q = R(k;a,b) - 1, b < a, d < N";
const SRK_THEOREM: &str = "Sum-rank codes bound set-coloring Ramsey numbers";
const SRK_ANCHOR: &str = "A_q^SRK(n,m,d) < R(k;r,s) <= 2^{c'k(r-s)^2 r^-1 log(r/min(s,r-s))} for q^m = R(k;a,b) - 1";
const UPPER_THEOREM: &str = "Ramsey upper bound from sum-rank codes";
const UPPER_ANCHOR: &str = "R(q^m'+1;t,d) <= max((1+eps) A_q^SRK(n,m,d-cj), eps d), j = (1-1/q^m')t - d + 1";
const GV_THEOREM: &str = "Sphere-covering (GV) lower bound";
const GV_ANCHOR: &str = "A >= |V| / V(d-1)";

fn lookup_step(table: &RamseyTable, k: u32, a: u32, b: u32) -> Result<Step> {
    let e = table.exact(k, a, b)?;
    Step::run("Ramsey table value", "R(k;a,b) from user table", StepOp::TableLookup {
        k,
        r: a,
        s: b,
        value: e.lo,
        source: e.source.clone(),
    })
}

fn supplied_step(value: &Nat, what: &str) -> Result<Step> {
    Step::run("Supplied code size bound", what, StepOp::Supplied { value: value.to_string(), description: what.into() })
}

fn gv_step(params: &SrkParams, d: usize) -> Result<Step> {
    Step::run(GV_THEOREM, GV_ANCHOR, StepOp::GvLower { params: params.to_spec(), d })
}

fn checked_product(x: usize, y: u32, what: &str) -> Result<u32> {
    u32::try_from(x).ok().and_then(|x| x.checked_mul(y)).ok_or_else(|| Error::InvalidParams(format!("{what} overflows")))
}

/// `R(k; Na, db) ≥ A_q(N, d) + 1` with `q = R(k; a, b) − 1`. Without a
/// supplied code bound the GV bound on the Hamming space `GF(q)^N` is used,
/// which needs `q` to be a prime power.
#[allow(clippy::too_many_arguments)]
pub fn hamming_to_ramsey_lb(
    k: u32,
    a: u32,
    b: u32,
    big_n: usize,
    d: usize,
    table: &RamseyTable,
    code_lb: Option<&Nat>,
) -> Result<DerivedBound> {
    if b >= a {
        return Err(Error::Precondition(format!("need b < a, got a = {a}, b = {b}")));
    }
    if big_n == 0 || d == 0 {
        return Err(Error::Precondition("N and d must be positive".into()));
    }
    let mut flags = Vec::new();
    if d >= big_n {
        flags.push(format!("hypothesis d < N not met (d = {d}, N = {big_n})"));
    }
    let lookup = lookup_step(table, k, a, b)?;
    let field = Step::run(HAMMING_THEOREM, "q = R(k;a,b) - 1", StepOp::FieldOrder { ramsey_value: table.exact(k, a, b)?.lo })?;
    let q = field.output.int()?.to_u32().ok_or(Error::InvalidParams("alphabet size too large".into()))?;
    let code_step = match code_lb {
        Some(v) => supplied_step(v, "lower bound on A_q(N,d)")?,
        None => {
            if gf::factor_prime_power(q).is_none() {
                return Err(Error::NotPrimePower(q));
            }
            gv_step(&SrkParams::hamming(q, big_n)?, d)?
        }
    };
    let code_size = code_step.output.int()?.to_string();
    let lower = Step::run(HAMMING_THEOREM, HAMMING_ANCHOR, StepOp::StrictlyAbove { code_size })?;
    let target = Target::Ramsey { k, r: checked_product(big_n, a, "N a")?, s: checked_product(d, b, "d b")? };
    DerivedBound::new(target, BoundKind::Lower, vec![lookup, field, code_step, lower], flags)
}

/// `R(k; Na, db) ≥ A_q^SRK(n, m, d) + 1` with `N = Σ n_i` and
/// `q^m = R(k; a, b) − 1`, `m = max m_i`. Also reports the exponent of the
/// upper cap for the configured `c'` and flags it when below the lower bound.
#[allow(clippy::too_many_arguments)]
pub fn srk_to_ramsey_lb(
    params: &SrkParams,
    d: usize,
    k: u32,
    a: u32,
    b: u32,
    table: &RamseyTable,
    srk_lb: Option<&Nat>,
    config: &ChainConfig,
) -> Result<DerivedBound> {
    config.validate()?;
    if b >= a {
        return Err(Error::Precondition(format!("need b < a, got a = {a}, b = {b}")));
    }
    if d == 0 {
        return Err(Error::Precondition("d must be positive".into()));
    }
    let big_n = params.hamming_length();
    let mut flags = Vec::new();
    if d >= big_n {
        flags.push(format!("hypothesis d < N not met (d = {d}, N = {big_n})"));
    }
    let lookup = lookup_step(table, k, a, b)?;
    let ramsey = table.exact(k, a, b)?.lo;
    let field = Step::run(SRK_THEOREM, "q^m = R(k;a,b) - 1", StepOp::FieldOrder { ramsey_value: ramsey })?;
    let qm = counting::pow(params.q() as u64, params.max_m() as u64);
    if &qm != field.output.int()? {
        return Err(Error::Precondition(format!(
            "table mismatch: q^m = {qm} but R({k};{a},{b}) - 1 = {}",
            field.output
        )));
    }
    let code_step = match srk_lb {
        Some(v) => supplied_step(v, "lower bound on A_q^SRK(n,m,d)")?,
        None => gv_step(params, d)?,
    };
    let code_size = code_step.output.int()?.to_string();
    let lower = Step::run(SRK_THEOREM, SRK_ANCHOR, StepOp::StrictlyAbove { code_size })?;
    let r = checked_product(big_n, a, "N a")?;
    let s = checked_product(d, b, "d b")?;
    let cap = Step::run(SRK_THEOREM, "log2 of the upper cap", StepOp::RamseyCapExponent {
        c_prime: config.c_prime,
        k,
        r,
        s,
        log_base: config.log_base,
    })?;
    let lower_bits = counting::ln_nat(lower.output.int()?) / std::f64::consts::LN_2;
    if let Value::Real(exp) = cap.output {
        if exp < lower_bits {
            flags.push(format!("inconsistent: cap 2^{exp} lies below the derived lower bound {}", lower.output));
        }
    }
    let cap_value = cap.output.clone();
    let mut out = DerivedBound::new(Target::Ramsey { k, r, s }, BoundKind::Lower, vec![lookup, field, code_step, lower, cap], flags)?;
    out.notes.push(("log2_upper_cap".into(), cap_value));
    Ok(out)
}

/// `R(q^{m'} + 1; t, d) ≤ max((1 + ε) A_q^SRK(n, m, ⌈d − cj⌉), ε d)` where
/// `t` is the number of blocks and `m' = min m_i`. The code size comes from
/// `srk_value`, called with the shifted distance.
pub fn ramsey_upper_from_srk(
    params: &SrkParams,
    d: usize,
    config: &ChainConfig,
    srk_value: &dyn Fn(usize) -> Result<Nat>,
) -> Result<DerivedBound> {
    config.validate()?;
    let t = params.t();
    let q = params.q();
    let m_min = params.min_m();
    let qm = counting::pow(q as u64, m_min as u64);
    // d ≤ (1 − q^{−m'}) t  ⇔  d q^{m'} ≤ (q^{m'} − 1) t
    if Nat::from(d) * &qm > (&qm - 1u32) * Nat::from(t) {
        return Err(Error::Precondition(format!("d = {d} exceeds (1 - 1/q^m') t for t = {t}")));
    }
    let shift = Step::run(UPPER_THEOREM, "j = (1-1/q^m')t - d + 1", StepOp::CorollaryShift { q, m_min, t, d })?;
    let Value::Real(j) = shift.output else { unreachable!() };
    let dist = Step::run(UPPER_THEOREM, "distance d - cj, rounded up", StepOp::ShiftedDistance { d, c: config.c, j })?;
    let Value::Real(dist_value) = dist.output else { unreachable!() };
    if dist_value < 1.0 {
        return Err(Error::Precondition(format!("d - cj = {} is below 1", d as f64 - config.c * j)));
    }
    let mut flags = vec!["valid only for the existential constants eps and c of the statement".to_string()];
    let exact_shift = d as f64 - config.c * j;
    if exact_shift.fract() != 0.0 {
        flags.push(format!("distance d - cj = {exact_shift} rounded up to {dist_value}"));
    }
    let dist_int = dist_value as usize;
    let a = srk_value(dist_int)?;
    let code = supplied_step(&a, &format!("A_q^SRK(n,m,{dist_int})"))?;
    let upper = Step::run(UPPER_THEOREM, UPPER_ANCHOR, StepOp::UpperMax { eps: config.eps, code_size: a.to_string(), d })?;
    let k = qm.to_u32().and_then(|x| x.checked_add(1)).ok_or(Error::InvalidParams("q^m' too large".into()))?;
    let target = Target::Ramsey { k, r: u32::try_from(t).unwrap_or(u32::MAX), s: u32::try_from(d).unwrap_or(u32::MAX) };
    DerivedBound::new(target, BoundKind::Upper, vec![shift, dist, code, upper], flags)
}

/// Finite checks of the zero-rate statement for one instance.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroRateReport {
    pub params: ParamsSpec,
    pub k: u64,
    pub j: u64,
    /// `N = Σ n_i`.
    #[serde(rename = "N")]
    pub big_n: usize,
    /// `m = max m_i`.
    pub m: usize,
    /// `j² (q^m − 1) ≤ N (k − 1)`, i.e. `j ≤ √(N(k−1)/(q^m−1))`.
    pub j_condition: bool,
    /// `(1 − 1/q^m)(N − j)` as a reduced fraction.
    pub distance_exact: String,
    pub distance: usize,
    pub distance_rounded: bool,
    /// `(1 − 1/q^m)(N − j) < N`.
    pub distance_below_n: bool,
    pub exact_a: Field<String>,
    /// `|C| ≥ 2` for the optimal code, when known.
    pub at_least_two: Option<bool>,
    pub note: String,
}

impl ZeroRateReport {
    pub fn passed(&self) -> bool {
        self.j_condition
    }
}

pub fn zero_rate_instance_check(params: &SrkParams, k: u64, j: u64, budgets: &Budgets) -> Result<ZeroRateReport> {
    let big_n = params.hamming_length();
    let m = params.max_m();
    let qm = counting::pow(params.q() as u64, m as u64);
    let j_condition = Nat::from(j) * Nat::from(j) * (&qm - 1u32) <= Nat::from(big_n) * Nat::from(k.saturating_sub(1));
    let remaining = (big_n as u64).saturating_sub(j);
    let num = (&qm - 1u32) * Nat::from(remaining);
    let g = num.gcd(&qm);
    let distance_exact = if num.is_zero() { "0".to_string() } else { format!("{}/{}", &num / &g, &qm / &g) };
    let ceil = Integer::div_ceil(&num, &qm);
    let distance = ceil.to_usize().ok_or(Error::InvalidParams("distance too large".into()))?;
    let distance_rounded = !(&num % &qm).is_zero();
    let distance_below_n = num < Nat::from(big_n) * &qm;

    let exact_a = if !j_condition {
        Field::NotApplicable
    } else if distance <= 1 {
        Field::Value(counting::space_size(params).to_string())
    } else {
        let spec = PowerGraphSpec::new(params.clone(), distance - 1);
        match graph::max_independent_set(&spec, budgets) {
            Ok(r) => Field::Value(r.size.to_string()),
            Err(Error::BudgetExceeded { .. }) => Field::NotComputed,
            Err(e) => return Err(e),
        }
    };
    let at_least_two = exact_a.value().map(|v| v.parse::<Nat>().map(|n| n >= Nat::from(2u32)).unwrap_or(false));
    Ok(ZeroRateReport {
        params: params.to_spec(),
        k,
        j,
        big_n,
        m,
        j_condition,
        distance_exact,
        distance,
        distance_rounded,
        distance_below_n,
        exact_a,
        at_least_two,
        note: "finite instance only; the asymptotic growth statement is not checked".into(),
    })
}

/// Independence number as a code-size oracle for [`ramsey_upper_from_srk`].
pub fn exact_code_size<'a>(params: &'a SrkParams, budgets: &'a Budgets) -> impl Fn(usize) -> Result<Nat> + 'a {
    move |d| {
        if d == 0 {
            return Err(Error::Precondition("distance must be positive".into()));
        }
        if d == 1 {
            return Ok(counting::space_size(params));
        }
        let r = graph::max_independent_set(&PowerGraphSpec::new(params.clone(), d - 1), budgets)?;
        Ok(Nat::from(r.size))
    }
}

/// Nonnegative integer given in JSON as a number or a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum NatInput {
    Num(u64),
    Text(String),
}

impl NatInput {
    pub fn to_nat(&self) -> Result<Nat> {
        match self {
            NatInput::Num(x) => Ok(Nat::from(*x)),
            NatInput::Text(s) => {
                s.parse().map_err(|_| Error::InvalidParams(format!("{s:?} is not a nonnegative integer")))
            }
        }
    }
}

/// One chain request of a chain file.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Chain {
    Hamming {
        k: u32,
        a: u32,
        b: u32,
        #[serde(rename = "N")]
        big_n: usize,
        d: usize,
        #[serde(default)]
        code_lb: Option<NatInput>,
    },
    SumRank {
        params: ParamsSpec,
        d: usize,
        k: u32,
        a: u32,
        b: u32,
        #[serde(default)]
        srk_lb: Option<NatInput>,
    },
    Upper {
        params: ParamsSpec,
        d: usize,
    },
    ZeroRate {
        params: ParamsSpec,
        k: u64,
        j: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct ChainFile {
    #[serde(default)]
    pub config: ChainConfig,
    pub chains: Vec<Chain>,
}

impl ChainFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ChainFile = serde_json::from_str(text)?;
        file.config.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ChainOutcome {
    Bound(DerivedBound),
    ZeroRate(ZeroRateReport),
}

/// Evaluates every chain of `file` in order; the first failure aborts.
pub fn run_chains(file: &ChainFile, table: &RamseyTable, budgets: &Budgets) -> Result<Vec<ChainOutcome>> {
    let nat = |x: &Option<NatInput>| x.as_ref().map(NatInput::to_nat).transpose();
    file.chains
        .iter()
        .map(|chain| match chain {
            Chain::Hamming { k, a, b, big_n, d, code_lb } => {
                let lb = nat(code_lb)?;
                hamming_to_ramsey_lb(*k, *a, *b, *big_n, *d, table, lb.as_ref()).map(ChainOutcome::Bound)
            }
            Chain::SumRank { params, d, k, a, b, srk_lb } => {
                let lb = nat(srk_lb)?;
                srk_to_ramsey_lb(&params.build()?, *d, *k, *a, *b, table, lb.as_ref(), &file.config)
                    .map(ChainOutcome::Bound)
            }
            Chain::Upper { params, d } => {
                let params = params.build()?;
                let oracle = exact_code_size(&params, budgets);
                ramsey_upper_from_srk(&params, *d, &file.config, &oracle).map(ChainOutcome::Bound)
            }
            Chain::ZeroRate { params, k, j } => {
                zero_rate_instance_check(&params.build()?, *k, *j, budgets).map(ChainOutcome::ZeroRate)
            }
        })
        .collect()
}
