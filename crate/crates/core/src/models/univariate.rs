use crate::error::{Error, Result};

/// A continuous univariate lifetime distribution on `[0, upper]`.
pub trait UnivariateLifetime: Send + Sync {
    fn name(&self) -> String;
    fn pdf(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> f64;
    fn survival(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }
    fn quantile(&self, p: f64) -> f64 {
        bisect_quantile(|x| self.cdf(x), p, 0.0, self.upper())
    }
    /// Right end of the support (may be infinite).
    fn upper(&self) -> f64 {
        f64::INFINITY
    }
}

/// Generalized inverse `inf{x : cdf(x) >= p}` by bisection, to 1e-12 in `x`
/// (relative for large `x`). An infinite `hi` is bracketed by doubling.
pub fn bisect_quantile<F: Fn(f64) -> f64>(cdf: F, p: f64, lo: f64, hi: f64) -> f64 {
    if p <= 0.0 {
        return lo;
    }
    if p >= 1.0 {
        return hi;
    }
    let mut a = lo;
    let mut b = if hi.is_finite() {
        hi
    } else {
        let mut b = lo + 1.0;
        let mut step = 1.0;
        while cdf(b) < p && b.is_finite() {
            step *= 2.0;
            b = lo + step;
        }
        b
    };
    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        if cdf(mid) >= p {
            b = mid;
        } else {
            a = mid;
        }
        if b - a <= 1e-12 * b.abs().max(1.0) {
            break;
        }
    }
    0.5 * (a + b)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Uniform {
    pub upper: f64,
}

impl Uniform {
    pub fn new(upper: f64) -> Result<Self> {
        if !(upper > 0.0 && upper.is_finite()) {
            return Err(Error::InvalidParameters(format!("uniform upper bound must be positive, got {upper}")));
        }
        Ok(Self { upper })
    }

    pub fn unit() -> Self {
        Self { upper: 1.0 }
    }
}

impl UnivariateLifetime for Uniform {
    fn name(&self) -> String {
        format!("uniform(0, {})", self.upper)
    }
    fn pdf(&self, x: f64) -> f64 {
        if (0.0..=self.upper).contains(&x) {
            1.0 / self.upper
        } else {
            0.0
        }
    }
    fn cdf(&self, x: f64) -> f64 {
        (x / self.upper).clamp(0.0, 1.0)
    }
    fn quantile(&self, p: f64) -> f64 {
        p.clamp(0.0, 1.0) * self.upper
    }
    fn upper(&self) -> f64 {
        self.upper
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponential {
    pub rate: f64,
}

impl Exponential {
    pub fn new(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameters(format!("exponential rate must be positive, got {rate}")));
        }
        Ok(Self { rate })
    }
}

impl UnivariateLifetime for Exponential {
    fn name(&self) -> String {
        format!("exponential({})", self.rate)
    }
    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.rate * (-self.rate * x).exp()
        }
    }
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-self.rate * x).exp_m1()
        }
    }
    fn survival(&self, x: f64) -> f64 {
        (-self.rate * x.max(0.0)).exp()
    }
    fn quantile(&self, p: f64) -> f64 {
        -(-p).ln_1p() / self.rate
    }
}

/// Weibull with `F(x) = 1 - exp(-(x/scale)^shape)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weibull {
    pub shape: f64,
    pub scale: f64,
}

impl Weibull {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0 && scale > 0.0 && shape.is_finite() && scale.is_finite()) {
            return Err(Error::InvalidParameters(format!("weibull needs positive shape/scale, got ({shape}, {scale})")));
        }
        Ok(Self { shape, scale })
    }
}

impl UnivariateLifetime for Weibull {
    fn name(&self) -> String {
        format!("weibull(shape={}, scale={})", self.shape, self.scale)
    }
    fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let z = x / self.scale;
        self.shape / self.scale * z.powf(self.shape - 1.0) * (-z.powf(self.shape)).exp()
    }
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-(x / self.scale).powf(self.shape)).exp_m1()
        }
    }
    fn survival(&self, x: f64) -> f64 {
        (-(x.max(0.0) / self.scale).powf(self.shape)).exp()
    }
    fn quantile(&self, p: f64) -> f64 {
        self.scale * (-(-p).ln_1p()).powf(1.0 / self.shape)
    }
}
