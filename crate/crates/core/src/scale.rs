//! Scale-dimension bookkeeping.
//!
//! Every field carries a rational exponent triple over the spaces of time
//! intervals 𝕋, lengths 𝕃 and masses 𝕄. Products of fields add triples,
//! contractions preserve the sum, additions require equal triples.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact rational exponent, kept normalized with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Frac {
    num: i32,
    den: i32,
}

fn gcd(a: i32, b: i32) -> i32 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl Frac {
    pub const ZERO: Frac = Frac { num: 0, den: 1 };

    pub fn new(num: i32, den: i32) -> Frac {
        assert!(den != 0, "zero denominator");
        let s = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den);
        Frac {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn int(n: i32) -> Frac {
        Frac { num: n, den: 1 }
    }

    pub fn num(&self) -> i32 {
        self.num
    }

    pub fn den(&self) -> i32 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Add for Frac {
    type Output = Frac;
    fn add(self, o: Frac) -> Frac {
        Frac::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }
}

impl Sub for Frac {
    type Output = Frac;
    fn sub(self, o: Frac) -> Frac {
        Frac::new(self.num * o.den - o.num * self.den, self.den * o.den)
    }
}

impl Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Mul<i32> for Frac {
    type Output = Frac;
    fn mul(self, k: i32) -> Frac {
        Frac::new(self.num * k, self.den)
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Scale dimension: exponents of 𝕋, 𝕃, 𝕄.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScaleDim {
    pub t: Frac,
    pub l: Frac,
    pub m: Frac,
}

impl ScaleDim {
    pub const DIMENSIONLESS: ScaleDim = ScaleDim {
        t: Frac::ZERO,
        l: Frac::ZERO,
        m: Frac::ZERO,
    };

    pub fn new(t: i32, l: i32, m: i32) -> ScaleDim {
        ScaleDim {
            t: Frac::int(t),
            l: Frac::int(l),
            m: Frac::int(m),
        }
    }

    pub fn new_frac(t: Frac, l: Frac, m: Frac) -> ScaleDim {
        ScaleDim { t, l, m }
    }

    /// Speed of light c ∈ 𝕋⁻¹ ⊗ 𝕃.
    pub fn speed_of_light() -> ScaleDim {
        ScaleDim::new(-1, 1, 0)
    }

    /// Planck constant ħ ∈ 𝕋⁻¹ ⊗ 𝕃² ⊗ 𝕄.
    pub fn planck() -> ScaleDim {
        ScaleDim::new(-1, 2, 1)
    }

    /// Particle mass m ∈ 𝕄.
    pub fn mass() -> ScaleDim {
        ScaleDim::new(0, 0, 1)
    }

    /// Charge q ∈ 𝕋⁻¹ ⊗ 𝕃^{3/2} ⊗ 𝕄^{1/2}.
    pub fn charge() -> ScaleDim {
        ScaleDim::new_frac(Frac::int(-1), Frac::new(3, 2), Frac::new(1, 2))
    }

    /// Lorentzian metric g ∈ 𝕃².
    pub fn metric() -> ScaleDim {
        ScaleDim::new(0, 2, 0)
    }

    /// Electromagnetic 2-form F ∈ 𝕃^{1/2} ⊗ 𝕄^{1/2}.
    pub fn em_field() -> ScaleDim {
        ScaleDim::new_frac(Frac::ZERO, Frac::new(1, 2), Frac::new(1, 2))
    }

    pub fn is_dimensionless(&self) -> bool {
        self.t.is_zero() && self.l.is_zero() && self.m.is_zero()
    }

    /// Predicted power of c when only the numeric value of c changes
    /// (ħ, m, metric data held fixed): the 𝕋-exponent must be carried
    /// entirely by explicit powers of c, so the power is −t.
    pub fn c_power(&self) -> Frac {
        -self.t
    }

    pub fn pow(&self, k: i32) -> ScaleDim {
        ScaleDim {
            t: self.t * k,
            l: self.l * k,
            m: self.m * k,
        }
    }
}

impl Add for ScaleDim {
    type Output = ScaleDim;
    fn add(self, o: ScaleDim) -> ScaleDim {
        ScaleDim {
            t: self.t + o.t,
            l: self.l + o.l,
            m: self.m + o.m,
        }
    }
}

impl Sub for ScaleDim {
    type Output = ScaleDim;
    fn sub(self, o: ScaleDim) -> ScaleDim {
        ScaleDim {
            t: self.t - o.t,
            l: self.l - o.l,
            m: self.m - o.m,
        }
    }
}

impl Neg for ScaleDim {
    type Output = ScaleDim;
    fn neg(self) -> ScaleDim {
        ScaleDim {
            t: -self.t,
            l: -self.l,
            m: -self.m,
        }
    }
}

impl fmt::Debug for ScaleDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T^{:?} L^{:?} M^{:?}", self.t, self.l, self.m)
    }
}
