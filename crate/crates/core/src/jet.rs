//! Forward-mode automatic differentiation scalars.
//!
//! `Jet1` carries a value and its gradient with respect to up to
//! [`MAX_VARS`] chart coordinates; `Jet2` additionally carries the full
//! Hessian. Every closed-form field in the crate is written generically
//! over [`Real`], so evaluating it on seeded jets yields exact first and
//! second partial derivatives (to machine precision) via the chain rule.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest chart dimension (tangent chart of spacetime).
pub const MAX_VARS: usize = 8;

/// Scalar abstraction: plain numbers and jets implement it, geometry code
/// is written once over `S: Real`.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    /// Primal value (used for guards and branching only).
    fn val(&self) -> f64;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn recip(self) -> Self {
        Self::from_f64(1.0) / self
    }
    fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::from_f64(1.0),
            _ if n < 0 => self.powi(-n).recip(),
            _ => {
                let mut acc = self;
                for _ in 1..n {
                    acc = acc * self;
                }
                acc
            }
        }
    }
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> f64 {
        x
    }
    fn val(&self) -> f64 {
        *self
    }
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn sin(self) -> f64 {
        f64::sin(self)
    }
    fn cos(self) -> f64 {
        f64::cos(self)
    }
}

/// First-order jet: value and gradient over `n` active variables.
#[derive(Clone, Copy, Debug)]
pub struct Jet1 {
    pub n: usize,
    pub v: f64,
    pub d: [f64; MAX_VARS],
}

impl Jet1 {
    pub fn constant(n: usize, v: f64) -> Jet1 {
        Jet1 {
            n,
            v,
            d: [0.0; MAX_VARS],
        }
    }

    /// Seed the `i`-th chart coordinate.
    pub fn var(n: usize, i: usize, v: f64) -> Jet1 {
        let mut d = [0.0; MAX_VARS];
        d[i] = 1.0;
        Jet1 { n, v, d }
    }
}

/// Second-order jet: value, gradient and Hessian over `n` active variables.
#[derive(Clone, Copy, Debug)]
pub struct Jet2 {
    pub n: usize,
    pub v: f64,
    pub d: [f64; MAX_VARS],
    pub dd: [[f64; MAX_VARS]; MAX_VARS],
}

impl Jet2 {
    pub fn constant(n: usize, v: f64) -> Jet2 {
        Jet2 {
            n,
            v,
            d: [0.0; MAX_VARS],
            dd: [[0.0; MAX_VARS]; MAX_VARS],
        }
    }

    pub fn var(n: usize, i: usize, v: f64) -> Jet2 {
        let mut d = [0.0; MAX_VARS];
        d[i] = 1.0;
        Jet2 {
            n,
            v,
            d,
            dd: [[0.0; MAX_VARS]; MAX_VARS],
        }
    }

    /// Drop the Hessian.
    pub fn lower(&self) -> Jet1 {
        Jet1 {
            n: self.n,
            v: self.v,
            d: self.d,
        }
    }

    /// The first partial along `axis` as a first-order jet: its value is
    /// ∂f, its gradient row comes from the Hessian. Exact, no truncation.
    pub fn partial(&self, axis: usize) -> Jet1 {
        Jet1 {
            n: self.n,
            v: self.d[axis],
            d: self.dd[axis],
        }
    }
}

macro_rules! unary_chain1 {
    ($u:expr, $f:expr, $f1:expr) => {{
        let u = $u;
        let f1 = $f1;
        let mut out = Jet1::constant(u.n, $f);
        for a in 0..u.n {
            out.d[a] = f1 * u.d[a];
        }
        out
    }};
}

macro_rules! unary_chain2 {
    ($u:expr, $f:expr, $f1:expr, $f2:expr) => {{
        let u = $u;
        let f1 = $f1;
        let f2 = $f2;
        let mut out = Jet2::constant(u.n, $f);
        for a in 0..u.n {
            out.d[a] = f1 * u.d[a];
        }
        for a in 0..u.n {
            for b in 0..u.n {
                out.dd[a][b] = f1 * u.dd[a][b] + f2 * u.d[a] * u.d[b];
            }
        }
        out
    }};
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(self, o: Jet1) -> Jet1 {
        let n = self.n.max(o.n);
        let mut r = self;
        r.n = n;
        r.v += o.v;
        for a in 0..n {
            r.d[a] += o.d[a];
        }
        r
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, o: Jet1) -> Jet1 {
        let n = self.n.max(o.n);
        let mut r = self;
        r.n = n;
        r.v -= o.v;
        for a in 0..n {
            r.d[a] -= o.d[a];
        }
        r
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        let mut r = self;
        r.v = -r.v;
        for a in 0..self.n {
            r.d[a] = -r.d[a];
        }
        r
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, o: Jet1) -> Jet1 {
        let n = self.n.max(o.n);
        let mut r = Jet1::constant(n, self.v * o.v);
        for a in 0..n {
            r.d[a] = self.d[a] * o.v + self.v * o.d[a];
        }
        r
    }
}

impl Div for Jet1 {
    type Output = Jet1;
    fn div(self, o: Jet1) -> Jet1 {
        self * o.recip()
    }
}

impl Real for Jet1 {
    fn from_f64(x: f64) -> Jet1 {
        // A constant is independent of every chart coordinate; n = 0 lets
        // binary ops adopt the other operand's active dimension.
        Jet1::constant(0, x)
    }
    fn val(&self) -> f64 {
        self.v
    }
    fn sqrt(self) -> Jet1 {
        let s = self.v.sqrt();
        unary_chain1!(self, s, 0.5 / s)
    }
    fn abs(self) -> Jet1 {
        let sg = if self.v < 0.0 { -1.0 } else { 1.0 };
        unary_chain1!(self, self.v.abs(), sg)
    }
    fn sin(self) -> Jet1 {
        unary_chain1!(self, self.v.sin(), self.v.cos())
    }
    fn cos(self) -> Jet1 {
        unary_chain1!(self, self.v.cos(), -self.v.sin())
    }
    fn recip(self) -> Jet1 {
        let iv = 1.0 / self.v;
        unary_chain1!(self, iv, -iv * iv)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        let n = self.n.max(o.n);
        let mut r = self;
        r.n = n;
        r.v += o.v;
        for a in 0..n {
            r.d[a] += o.d[a];
            for b in 0..n {
                r.dd[a][b] += o.dd[a][b];
            }
        }
        r
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        let n = self.n.max(o.n);
        let mut r = self;
        r.n = n;
        r.v -= o.v;
        for a in 0..n {
            r.d[a] -= o.d[a];
            for b in 0..n {
                r.dd[a][b] -= o.dd[a][b];
            }
        }
        r
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        let mut r = self;
        r.v = -r.v;
        for a in 0..self.n {
            r.d[a] = -r.d[a];
            for b in 0..self.n {
                r.dd[a][b] = -r.dd[a][b];
            }
        }
        r
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let n = self.n.max(o.n);
        let mut r = Jet2::constant(n, self.v * o.v);
        for a in 0..n {
            r.d[a] = self.d[a] * o.v + self.v * o.d[a];
        }
        for a in 0..n {
            for b in 0..n {
                r.dd[a][b] = self.dd[a][b] * o.v
                    + self.v * o.dd[a][b]
                    + self.d[a] * o.d[b]
                    + self.d[b] * o.d[a];
            }
        }
        r
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Real for Jet2 {
    fn from_f64(x: f64) -> Jet2 {
        Jet2::constant(0, x)
    }
    fn val(&self) -> f64 {
        self.v
    }
    fn sqrt(self) -> Jet2 {
        let s = self.v.sqrt();
        unary_chain2!(self, s, 0.5 / s, -0.25 / (s * s * s))
    }
    fn abs(self) -> Jet2 {
        let sg = if self.v < 0.0 { -1.0 } else { 1.0 };
        unary_chain2!(self, self.v.abs(), sg, 0.0)
    }
    fn sin(self) -> Jet2 {
        unary_chain2!(self, self.v.sin(), self.v.cos(), -self.v.sin())
    }
    fn cos(self) -> Jet2 {
        unary_chain2!(self, self.v.cos(), -self.v.sin(), -self.v.cos())
    }
    fn recip(self) -> Jet2 {
        let iv = 1.0 / self.v;
        unary_chain2!(self, iv, -iv * iv, 2.0 * iv * iv * iv)
    }
}

/// Seed a full coordinate tuple as first-order jets.
pub fn seed1(x: &[f64]) -> Vec<Jet1> {
    let n = x.len();
    x.iter()
        .enumerate()
        .map(|(i, &v)| Jet1::var(n, i, v))
        .collect()
}

/// Seed a full coordinate tuple as second-order jets.
pub fn seed2(x: &[f64]) -> Vec<Jet2> {
    let n = x.len();
    x.iter()
        .enumerate()
        .map(|(i, &v)| Jet2::var(n, i, v))
        .collect()
}
