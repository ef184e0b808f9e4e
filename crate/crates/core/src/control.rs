//! Control functions and the fast-growing function hierarchies, evaluated
//! exactly on big naturals under an explicit [`EvalBudget`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Resource limits for a single evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalBudget {
    pub max_result_bits: u64,
    pub max_steps: u64,
}

impl EvalBudget {
    pub const DEFAULT_BITS: u64 = 16_384;
    pub const DEFAULT_STEPS: u64 = 10_000_000;

    pub fn new(max_result_bits: u64, max_steps: u64) -> Result<Self> {
        if max_result_bits == 0 || max_steps == 0 {
            return Err(Error::Precondition("budget limits must be positive".into()));
        }
        Ok(Self { max_result_bits, max_steps })
    }

    pub fn with_steps(self, max_steps: u64) -> Self {
        Self { max_steps: max_steps.max(1), ..self }
    }

    pub fn with_bits(self, max_result_bits: u64) -> Self {
        Self { max_result_bits: max_result_bits.max(1), ..self }
    }
}

impl Default for EvalBudget {
    fn default() -> Self {
        Self { max_result_bits: Self::DEFAULT_BITS, max_steps: Self::DEFAULT_STEPS }
    }
}

/// Running consumption against a budget.
#[derive(Debug)]
pub struct Meter {
    budget: EvalBudget,
    steps: u64,
}

impl Meter {
    pub fn new(budget: EvalBudget) -> Self {
        Self { budget, steps: 0 }
    }

    pub fn budget(&self) -> EvalBudget {
        self.budget
    }

    pub fn steps_used(&self) -> u64 {
        self.steps
    }

    pub fn tick(&mut self) -> Result<()> {
        self.tick_n(1)
    }

    pub fn tick_n(&mut self, n: u64) -> Result<()> {
        self.steps = self.steps.saturating_add(n);
        if self.steps > self.budget.max_steps {
            return Err(Error::steps(self.budget.max_steps));
        }
        Ok(())
    }

    /// Fails when `v >= 2^max_result_bits`.
    pub fn check(&self, v: &BigUint) -> Result<()> {
        if v.bits() > self.budget.max_result_bits {
            return Err(Error::bits(self.budget.max_result_bits));
        }
        Ok(())
    }

    pub fn checked(&self, v: BigUint) -> Result<BigUint> {
        self.check(&v)?;
        Ok(v)
    }

    /// Fails early when a power of two `2^e` alone would exceed the bit limit.
    fn check_exponent(&self, e: &BigUint) -> Result<u64> {
        match e.to_u64() {
            Some(e) if e < self.budget.max_result_bits => Ok(e),
            _ => Err(Error::bits(self.budget.max_result_bits)),
        }
    }
}

/// A monotone unary function on the naturals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ControlFunction {
    Successor,
    AddConst(u64),
    MulConst(u64),
    Affine { a: u64, b: u64 },
    Square,
    PowTwoPlusOne,
    /// `F_gamma` of the fast-growing hierarchy, finite level only.
    Fgh(u32),
    /// Explicit values on `0..len`; evaluation outside the domain fails.
    Table(Vec<BigUint>),
}

impl ControlFunction {
    /// Builds a table-backed control, rejecting non-monotone tables.
    pub fn table(values: Vec<BigUint>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidControl("empty table".into()));
        }
        if let Some(i) = values.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidControl(format!(
                "table is not monotone at {}: {} > {}",
                i,
                values[i],
                values[i + 1]
            )));
        }
        if values.iter().all(Zero::is_zero) {
            return Err(Error::InvalidControl("table is identically zero".into()));
        }
        Ok(ControlFunction::Table(values))
    }

    pub fn affine(a: u64, b: u64) -> Result<Self> {
        if a == 0 && b == 0 {
            return Err(Error::InvalidControl("0*x+0 is identically zero".into()));
        }
        Ok(ControlFunction::Affine { a, b })
    }

    pub fn mul(c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidControl("0*x is identically zero".into()));
        }
        Ok(ControlFunction::MulConst(c))
    }

    pub fn eval(&self, x: &BigUint, meter: &mut Meter) -> Result<BigUint> {
        let v = match self {
            ControlFunction::Successor => x + 1u32,
            ControlFunction::AddConst(c) => x + *c,
            ControlFunction::MulConst(c) => x * *c,
            ControlFunction::Affine { a, b } => x * *a + *b,
            ControlFunction::Square => {
                if x.bits() > meter.budget.max_result_bits / 2 + 1 {
                    return Err(Error::bits(meter.budget.max_result_bits));
                }
                x * x
            }
            ControlFunction::PowTwoPlusOne => {
                let e = meter.check_exponent(x)?;
                (BigUint::one() << e) + 1u32
            }
            ControlFunction::Fgh(level) => fgh_iter(*level, &BigUint::one(), x.clone(), meter)?,
            ControlFunction::Table(values) => match x.to_usize().and_then(|i| values.get(i)) {
                Some(v) => v.clone(),
                None => {
                    return Err(Error::OutsideTable { x: x.to_string(), len: values.len() });
                }
            },
        };
        meter.checked(v)
    }

    pub fn eval_u64(&self, x: u64, meter: &mut Meter) -> Result<BigUint> {
        self.eval(&BigUint::from(x), meter)
    }

    /// `f(0)`, which the standard setting requires to be positive.
    pub fn positive_at_zero(&self) -> bool {
        let mut meter = Meter::new(EvalBudget::default());
        self.eval(&BigUint::zero(), &mut meter).is_ok_and(|v| !v.is_zero())
    }

    /// Checks `x <= y => f(x) <= f(y)` on `0..=upto`, skipping values that do
    /// not fit the budget.
    pub fn is_monotone_on(&self, upto: u64, budget: EvalBudget) -> bool {
        let mut prev: Option<BigUint> = None;
        for x in 0..=upto {
            let mut meter = Meter::new(budget);
            match self.eval_u64(x, &mut meter) {
                Ok(v) => {
                    if prev.as_ref().is_some_and(|p| *p > v) {
                        return false;
                    }
                    prev = Some(v);
                }
                Err(_) => break,
            }
        }
        true
    }
}

impl fmt::Display for ControlFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControlFunction::Successor => f.write_str("succ"),
            ControlFunction::AddConst(c) => write!(f, "x+{c}"),
            ControlFunction::MulConst(c) => write!(f, "{c}*x"),
            ControlFunction::Affine { a, b } => write!(f, "{a}*x+{b}"),
            ControlFunction::Square => f.write_str("x^2"),
            ControlFunction::PowTwoPlusOne => f.write_str("2^x+1"),
            ControlFunction::Fgh(level) => write!(f, "F{level}"),
            ControlFunction::Table(values) => {
                let body: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "table:{}", body.join(","))
            }
        }
    }
}

impl FromStr for ControlFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |msg: &str| Error::usage(s, msg);
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad("expected a natural constant"));
        let f = match compact.as_str() {
            "succ" => ControlFunction::Successor,
            "x^2" | "x*x" => ControlFunction::Square,
            "2^x+1" => ControlFunction::PowTwoPlusOne,
            other => {
                if let Some(level) = other.strip_prefix('F') {
                    let level = level.parse::<u32>().map_err(|_| bad("expected F<level>"))?;
                    ControlFunction::Fgh(level)
                } else if let Some(body) = other.strip_prefix("table:") {
                    let values = body
                        .split(',')
                        .map(|v| v.parse::<BigUint>().map_err(|_| bad("bad table entry")))
                        .collect::<Result<Vec<_>>>()?;
                    ControlFunction::table(values)?
                } else if let Some(c) = other.strip_prefix("x+") {
                    ControlFunction::AddConst(num(c)?)
                } else if let Some((a, rest)) = other.split_once("*x") {
                    let a = num(a)?;
                    match rest.strip_prefix('+') {
                        Some(b) => ControlFunction::affine(a, num(b)?)?,
                        None if rest.is_empty() => ControlFunction::mul(a)?,
                        None => return Err(bad("expected a*x or a*x+b")),
                    }
                } else {
                    return Err(bad("unknown control function"));
                }
            }
        };
        Ok(f)
    }
}

/// `f(x)` under a fresh meter.
pub fn ctrl_eval(f: &ControlFunction, x: &BigUint, budget: EvalBudget) -> Result<BigUint> {
    f.eval(x, &mut Meter::new(budget))
}

/// Number of regions `N_k(x) = k * (f(x) - 1)`, with cut-off subtraction so
/// that controls with `f(x) = 0` yield no regions.
pub fn region_count(k: u32, x: &BigUint, f: &ControlFunction, meter: &mut Meter) -> Result<BigUint> {
    if k == 0 {
        return Ok(BigUint::zero());
    }
    let fx = f.eval(x, meter)?;
    if fx.is_zero() {
        return Ok(BigUint::zero());
    }
    meter.checked((fx - 1u32) * k)
}

fn clamp_iterations(p: &BigUint) -> u64 {
    p.to_u64().unwrap_or(u64::MAX)
}

/// `F_n^p(x)`.
pub(crate) fn fgh_iter(n: u32, p: &BigUint, x: BigUint, meter: &mut Meter) -> Result<BigUint> {
    match n {
        0 => {
            meter.tick()?;
            meter.checked(x + p)
        }
        // F_1(x) = 2x+1, hence F_1^p(x) = 2^p (x+1) - 1
        1 => {
            meter.tick()?;
            let e = meter.check_exponent(p)?;
            meter.checked(((x + 1u32) << e) - 1u32)
        }
        _ => {
            let mut x = x;
            for _ in 0..clamp_iterations(p) {
                meter.tick()?;
                let reps = &x + 1u32;
                x = fgh_iter(n - 1, &reps, x, meter)?;
            }
            Ok(x)
        }
    }
}

/// `F_n^p(x)` of the fast-growing hierarchy, `F_0(x) = x+1`,
/// `F_{n+1}(x) = F_n^{x+1}(x)`.
pub fn fgh_eval(n: u32, p: &BigUint, x: &BigUint, budget: EvalBudget) -> Result<BigUint> {
    fgh_iter(n, p, x.clone(), &mut Meter::new(budget))
}

/// `A_k^p(x)`.
pub(crate) fn ackermann_iter(k: u32, p: &BigUint, x: BigUint, meter: &mut Meter) -> Result<BigUint> {
    match k {
        0 => Err(Error::Precondition("Ackermann level must be >= 1".into())),
        // A_1(x) = 2x, hence A_1^p(x) = 2^p x
        1 => {
            meter.tick()?;
            if x.is_zero() {
                return Ok(x);
            }
            let e = meter.check_exponent(p)?;
            meter.checked(x << e)
        }
        _ => {
            let mut x = x;
            for _ in 0..clamp_iterations(p) {
                meter.tick()?;
                x = ackermann_iter(k - 1, &x, BigUint::one(), meter)?;
            }
            Ok(x)
        }
    }
}

/// `A_k(x)` with `A_1(x) = 2x` and `A_{k+1}(x) = A_k^x(1)`.
pub fn ackermann_eval(k: u32, x: &BigUint, budget: EvalBudget) -> Result<BigUint> {
    ackermann_iter(k, &BigUint::one(), x.clone(), &mut Meter::new(budget))
}

/// `G_k^p(x)`.
pub(crate) fn g_iter(
    k: u32,
    p: &BigUint,
    x: BigUint,
    f: &ControlFunction,
    meter: &mut Meter,
) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::Precondition("G level must be >= 1".into()));
    }
    let mut x = x;
    for _ in 0..clamp_iterations(p) {
        meter.tick()?;
        let next = if k == 1 {
            f.eval(&x, meter)? + &x
        } else {
            let reps = region_count(k, &x, f, meter)?;
            g_iter(k - 1, &reps, &x + 1u32, f, meter)?
        };
        meter.check(&next)?;
        if next == x {
            // fixed point: further iterations change nothing
            break;
        }
        x = next;
    }
    Ok(x)
}

/// `G_k^p(x)` with `G_1(x) = f(x) + x` and `G_{k+1}(x) = G_k^{N_{k+1}(x)}(x+1)`.
pub fn g_eval(k: u32, p: &BigUint, x: &BigUint, f: &ControlFunction, budget: EvalBudget) -> Result<BigUint> {
    g_iter(k, p, x.clone(), f, &mut Meter::new(budget))
}
