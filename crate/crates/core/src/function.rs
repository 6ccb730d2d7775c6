//! Homogeneous two-variable functions, stored through their profile on the
//! segment `x + y = 1`, and the extended-real values their pairings take.

use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

use crate::error::{PwError, Result};

/// A finite real or `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    pub const ZERO: Self = Self::Finite(0.0);

    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            Self::PosInfinity
        } else {
            Self::Finite(x)
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::PosInfinity)
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Self::Finite(x) => Some(x),
            Self::PosInfinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// `|a - b|`, with `inf - inf` taken as 0.
    pub fn gap(&self, other: &Self) -> f64 {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => (a - b).abs(),
            (Self::PosInfinity, Self::PosInfinity) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl Add for ExtendedReal {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Self::Finite(a), Self::Finite(b)) => Self::Finite(a + b),
            _ => Self::PosInfinity,
        }
    }
}

/// Multiplication with `0 * inf = 0`. Negative times `+inf` does not arise
/// for the functionals in this crate and panics.
impl Mul for ExtendedReal {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Self::Finite(a), Self::Finite(b)) => Self::Finite(a * b),
            (Self::Finite(a), Self::PosInfinity) | (Self::PosInfinity, Self::Finite(a)) => {
                assert!(a >= 0.0, "negative factor times +inf");
                if a == 0.0 {
                    Self::ZERO
                } else {
                    Self::PosInfinity
                }
            }
            (Self::PosInfinity, Self::PosInfinity) => Self::PosInfinity,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(x) => write!(f, "{x}"),
            Self::PosInfinity => f.write_str("+inf"),
        }
    }
}

type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A degree-1 homogeneous function `phi` on `[0, inf)^2`, given by
/// `f(x) = phi(x, 1 - x)` on `[0, 1]`, so that
/// `phi(x, y) = (x + y) f(x / (x + y))`.
///
/// `f0` and `f1` are the values used on spectral points classified as exactly
/// 0 or exactly 1; `f64::INFINITY` stands for `+inf`.
#[derive(Clone)]
pub struct PwFunction {
    id: String,
    profile: Profile,
    f0: f64,
    f1: f64,
}

impl fmt::Debug for PwFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PwFunction")
            .field("id", &self.id)
            .field("f0", &self.f0)
            .field("f1", &self.f1)
            .finish()
    }
}

impl PwFunction {
    /// A user profile. Endpoint values are taken from the profile itself.
    pub fn custom(id: impl Into<String>, profile: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let f0 = profile(0.0);
        let f1 = profile(1.0);
        Self::with_endpoints(id, profile, f0, f1)
    }

    /// A user profile with explicit values at the classified endpoints.
    pub fn with_endpoints(
        id: impl Into<String>,
        profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f0: f64,
        f1: f64,
    ) -> Result<Self> {
        let id = id.into();
        for (at, v) in [("0", f0), ("1", f1)] {
            if v.is_nan() || v == f64::NEG_INFINITY {
                return Err(PwError::Input(format!("function {id} takes value {v} at {at}")));
            }
        }
        Ok(Self { id, profile: Arc::new(profile), f0, f1 })
    }

    fn builtin(id: String, profile: impl Fn(f64) -> f64 + Send + Sync + 'static, f0: f64, f1: f64) -> Self {
        Self { id, profile: Arc::new(profile), f0, f1 }
    }

    /// `1_{(0,inf)}(x) y`: the absolutely continuous part.
    pub fn abs_part() -> Self {
        Self::builtin("abs-part".into(), |x| if x > 0.0 { 1.0 - x } else { 0.0 }, 0.0, 0.0)
    }

    /// `1_{0}(x) y`: the singular part, complement of [`Self::abs_part`].
    pub fn singular_part() -> Self {
        Self::builtin("singular-part".into(), |x| if x > 0.0 { 0.0 } else { 1.0 - x }, 1.0, 0.0)
    }

    /// `xy / (x + y)`: the parallel sum.
    pub fn parallel() -> Self {
        Self::builtin("parallel".into(), |x| x * (1.0 - x), 0.0, 0.0)
    }

    /// `x + y`.
    pub fn arith() -> Self {
        Self::builtin("arith".into(), |_| 1.0, 1.0, 1.0)
    }

    /// `x`.
    pub fn left() -> Self {
        Self::builtin("left".into(), |x| x, 0.0, 1.0)
    }

    /// `y`.
    pub fn right() -> Self {
        Self::builtin("right".into(), |x| 1.0 - x, 1.0, 0.0)
    }

    /// `x^alpha y^(1-alpha)` for `alpha` in `(0, 1)`.
    pub fn geom(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(PwError::Input(format!("geom requires alpha in (0, 1), got {alpha}")));
        }
        Ok(Self::builtin(
            format!("geom:{alpha}"),
            move |x| x.powf(alpha) * (1.0 - x).powf(1.0 - alpha),
            0.0,
            0.0,
        ))
    }

    /// `(x / y)^alpha y` for `alpha > 1`, `+inf` where `x > 0 = y`.
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(PwError::Input(format!("power requires alpha > 1, got {alpha}")));
        }
        Ok(Self::builtin(
            format!("power:{alpha}"),
            move |x| {
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    f64::INFINITY
                } else {
                    x.powf(alpha) * (1.0 - x).powf(1.0 - alpha)
                }
            },
            0.0,
            f64::INFINITY,
        ))
    }

    /// `x log(x / y)`, with `0` at `x = 0` and `+inf` where `x > 0 = y`.
    pub fn entropy() -> Self {
        Self::builtin(
            "entropy".into(),
            |x| {
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    f64::INFINITY
                } else {
                    x * (x / (1.0 - x)).ln()
                }
            },
            0.0,
            f64::INFINITY,
        )
    }

    /// `nxy / (nx + y)`: the parallel sum of `nA` and `B`.
    pub fn scaled_parallel(n: f64) -> Result<Self> {
        if !(n > 0.0 && n.is_finite()) {
            return Err(PwError::Input(format!("scaled parallel sum requires n > 0, got {n}")));
        }
        Ok(Self::builtin(
            format!("phi-n:{n}"),
            move |x| {
                let den = n * x + 1.0 - x;
                if den > 0.0 {
                    n * x * (1.0 - x) / den
                } else {
                    0.0
                }
            },
            0.0,
            0.0,
        ))
    }

    /// `x h_n(x)` with `h_n(x) = (1 - x) / x` on `[1/n, 1]`, zero below.
    pub fn truncated_derivative(n: f64) -> Result<Self> {
        if !(n >= 1.0 && n.is_finite()) {
            return Err(PwError::Input(format!("truncation level must be >= 1, got {n}")));
        }
        let cut = 1.0 / n;
        Ok(Self::builtin(
            format!("h-n:{n}"),
            move |x| if x >= cut { 1.0 - x } else { 0.0 },
            0.0,
            0.0,
        ))
    }

    /// Parses the CLI naming scheme `NAME` or `NAME:PARAM`.
    pub fn parse(spec: &str, fallback_param: Option<f64>) -> Result<Self> {
        let (name, param) = match spec.split_once(':') {
            Some((name, p)) => {
                let v: f64 = p
                    .parse()
                    .map_err(|_| PwError::Input(format!("cannot parse parameter {p:?} of {name}")))?;
                (name, Some(v))
            }
            None => (spec, fallback_param),
        };
        let need = |what: &str| {
            param.ok_or_else(|| PwError::Input(format!("{what} needs a parameter ({what}:VALUE or --alpha)")))
        };
        match name {
            "abs-part" => Ok(Self::abs_part()),
            "singular-part" => Ok(Self::singular_part()),
            "parallel" => Ok(Self::parallel()),
            "arith" => Ok(Self::arith()),
            "left" => Ok(Self::left()),
            "right" => Ok(Self::right()),
            "entropy" => Ok(Self::entropy()),
            "geom" => Self::geom(need("geom")?),
            "power" => Self::power(need("power")?),
            "phi-n" => Self::scaled_parallel(need("phi-n")?),
            "h-n" => Self::truncated_derivative(need("h-n")?),
            other => Err(PwError::Input(format!(
                "unknown function {other:?}; expected one of abs-part, singular-part, parallel, arith, left, right, geom:A, power:A, entropy, phi-n:N, h-n:N"
            ))),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn f1(&self) -> f64 {
        self.f1
    }

    pub fn vanishes_at_zero(&self) -> bool {
        self.f0 == 0.0
    }

    /// Raw profile value at an interior point.
    pub fn profile(&self, x: f64) -> Result<f64> {
        let v = (self.profile)(x);
        if v.is_nan() || v == f64::NEG_INFINITY {
            return Err(PwError::Input(format!("function {} returned {v} at x = {x}", self.id)));
        }
        Ok(v)
    }

    /// Value at a spectral point after zero/one classification.
    pub fn classified(&self, class: SpectralClass, x: f64) -> Result<f64> {
        match class {
            SpectralClass::Zero => Ok(self.f0),
            SpectralClass::One => Ok(self.f1),
            SpectralClass::Interior => self.profile(x),
        }
    }

    /// `phi(x, y)` recovered by homogeneity.
    pub fn two_variable(&self, x: f64, y: f64) -> Result<f64> {
        let s = x + y;
        if s <= 0.0 {
            return Ok(0.0);
        }
        let t = x / s;
        let v = if x == 0.0 {
            self.f0
        } else if y == 0.0 {
            self.f1
        } else {
            self.profile(t)?
        };
        Ok(if v == f64::INFINITY { v } else { s * v })
    }
}

/// Where a spectral point of `R` (inside `[0, 1]`) falls after thresholding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralClass {
    Zero,
    Interior,
    One,
}

impl SpectralClass {
    pub fn of(x: f64, zero_tol: f64, one_tol: f64) -> Self {
        if x <= zero_tol {
            Self::Zero
        } else if x >= 1.0 - one_tol {
            Self::One
        } else {
            Self::Interior
        }
    }
}
