//! Chart-level tensor arithmetic on dense component arrays.
//!
//! Forms and multivectors are stored with their full antisymmetric
//! component arrays and evaluated on vectors by plain contraction, so that
//! (α∧β)(X,Y) = α(X)β(Y) − α(Y)β(X). Under this convention the insertion
//! of a k-vector into a p-form carries a 1/k! factor.

use crate::error::TensorError;
use crate::scale::ScaleDim;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variance {
    Co,
    Contra,
}

/// Dense real component array over a single chart.
#[derive(Clone, Debug)]
pub struct Components {
    pub shape: Vec<usize>,
    pub variance: Vec<Variance>,
    pub data: Vec<f64>,
    pub scale: ScaleDim,
}

fn total_len(shape: &[usize]) -> usize {
    shape.iter().product::<usize>().max(1)
}

/// Iterate all multi-indices of `shape` in row-major order.
pub fn multi_indices(shape: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let len = total_len(shape);
    (0..len).map(move |mut flat| {
        let mut idx = vec![0usize; shape.len()];
        for ax in (0..shape.len()).rev() {
            idx[ax] = flat % shape[ax];
            flat /= shape[ax];
        }
        idx
    })
}

fn flat_index(shape: &[usize], idx: &[usize]) -> usize {
    let mut f = 0usize;
    for (ax, &i) in idx.iter().enumerate() {
        debug_assert!(i < shape[ax]);
        f = f * shape[ax] + i;
    }
    f
}

/// Visit all permutations of `0..k` with their signs.
pub fn for_each_permutation(k: usize, mut f: impl FnMut(&[usize], f64)) {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    let mut sign = 1.0;
    f(&perm, sign);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            f(&perm, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

impl Components {
    pub fn zeros(shape: Vec<usize>, variance: Vec<Variance>, scale: ScaleDim) -> Components {
        assert_eq!(shape.len(), variance.len());
        let len = total_len(&shape);
        Components {
            data: vec![0.0; len],
            shape,
            variance,
            scale,
        }
    }

    pub fn scalar(value: f64, scale: ScaleDim) -> Components {
        Components {
            shape: vec![],
            variance: vec![],
            data: vec![value],
            scale,
        }
    }

    pub fn from_fn(
        shape: Vec<usize>,
        variance: Vec<Variance>,
        scale: ScaleDim,
        mut f: impl FnMut(&[usize]) -> f64,
    ) -> Components {
        let mut out = Components::zeros(shape, variance, scale);
        let shape = out.shape.clone();
        for idx in multi_indices(&shape) {
            let v = f(&idx);
            out.set(&idx, v);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[flat_index(&self.shape, idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let f = flat_index(&self.shape, idx);
        self.data[f] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, k: f64) -> Components {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= k;
        }
        out
    }

    /// Scale-checked addition: shapes, variances and scale dimensions must
    /// agree.
    pub fn add(&self, rhs: &Components) -> Result<Components, TensorError> {
        if self.scale != rhs.scale {
            return Err(TensorError::ScaleMismatch {
                left: format!("{:?}", self.scale),
                right: format!("{:?}", rhs.scale),
            });
        }
        self.add_unscaled(rhs)
    }

    /// Addition with scale checking disabled (shape/variance still checked).
    pub fn add_unscaled(&self, rhs: &Components) -> Result<Components, TensorError> {
        if self.shape != rhs.shape {
            return Err(TensorError::ShapeMismatch {
                left: self.shape.clone(),
                right: rhs.shape.clone(),
            });
        }
        if self.variance != rhs.variance {
            return Err(TensorError::VarianceMismatch);
        }
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o += r;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Components) -> Result<Components, TensorError> {
        self.add(&rhs.scaled(-1.0))
    }

    /// Max |A − B| componentwise.
    pub fn max_abs_diff(&self, rhs: &Components) -> f64 {
        assert_eq!(self.shape, rhs.shape);
        self.data
            .iter()
            .zip(rhs.data.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        let alt = alt(self).expect("alt on antisymmetry check");
        self.max_abs_diff(&alt) <= tol * self.max_abs().max(1.0)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let mut worst = 0.0f64;
        let shape = self.shape.clone();
        for idx in multi_indices(&shape) {
            let mut rev: Vec<usize> = idx.clone();
            rev.reverse();
            if shape.len() == 2 {
                worst = worst.max((self.get(&idx) - self.get(&rev)).abs());
            }
        }
        worst <= tol * self.max_abs().max(1.0)
    }

    /// Tensor product; scale dimensions add.
    pub fn tensor_product(&self, rhs: &Components) -> Components {
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&rhs.shape);
        let mut variance = self.variance.clone();
        variance.extend_from_slice(&rhs.variance);
        let mut out = Components::zeros(shape, variance, self.scale + rhs.scale);
        let rlen = rhs.data.len();
        for (i, a) in self.data.iter().enumerate() {
            for (j, b) in rhs.data.iter().enumerate() {
                out.data[i * rlen + j] = a * b;
            }
        }
        out
    }
}

/// Full antisymmetrization with 1/p! normalization (idempotent on
/// antisymmetric arrays). All axes must have equal length and variance.
pub fn alt(t: &Components) -> Result<Components, TensorError> {
    let p = t.rank();
    if p < 2 {
        return Ok(t.clone());
    }
    let n = t.shape[0];
    if t.shape.iter().any(|&s| s != n) {
        return Err(TensorError::ShapeMismatch {
            left: t.shape.clone(),
            right: vec![n; p],
        });
    }
    if t.variance.iter().any(|&v| v != t.variance[0]) {
        return Err(TensorError::VarianceMismatch);
    }
    let mut out = Components::zeros(t.shape.clone(), t.variance.clone(), t.scale);
    let norm = 1.0 / (1..=p).product::<usize>() as f64;
    let shape = t.shape.clone();
    for idx in multi_indices(&shape) {
        let mut acc = 0.0;
        for_each_permutation(p, |perm, sign| {
            let permuted: Vec<usize> = perm.iter().map(|&k| idx[k]).collect();
            acc += sign * t.get(&permuted);
        });
        out.set(&idx, acc * norm);
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// All (p,q)-shuffles of 0..p+q with signs: permutations increasing on the
/// first p and the last q slots.
fn for_each_shuffle(p: usize, q: usize, mut f: impl FnMut(&[usize], f64)) {
    // Choose which positions of the output go to the first factor.
    let total = p + q;
    let mut choice: Vec<usize> = (0..p).collect();
    loop {
        // sign = (−1)^{inversions} of the shuffle permutation
        let mut perm = Vec::with_capacity(total);
        perm.extend_from_slice(&choice);
        for i in 0..total {
            if !choice.contains(&i) {
                perm.push(i);
            }
        }
        let mut inv = 0usize;
        for a in 0..total {
            for b in (a + 1)..total {
                if perm[a] > perm[b] {
                    inv += 1;
                }
            }
        }
        let sign = if inv % 2 == 0 { 1.0 } else { -1.0 };
        f(&perm, sign);
        // next combination
        let mut i = p;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if choice[i] < total - (p - i) {
                choice[i] += 1;
                for j in (i + 1)..p {
                    choice[j] = choice[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Graded-antisymmetric wedge product of two antisymmetric arrays, in the
/// convention (α∧β)(X,Y) = α(X)β(Y) − α(Y)β(X); scale dimensions add.
/// Degrees exceeding the chart dimension yield a zero array, not an error.
pub fn wedge(a: &Components, b: &Components) -> Result<Components, TensorError> {
    let p = a.rank();
    let q = b.rank();
    if p == 0 || q == 0 {
        // scalar factor
        let (s, t) = if p == 0 { (a, b) } else { (b, a) };
        return Ok(t.scaled(s.data[0]).with_scale(a.scale + b.scale));
    }
    let n = a.shape[0];
    if b.shape[0] != n || a.shape.iter().any(|&s| s != n) || b.shape.iter().any(|&s| s != n) {
        return Err(TensorError::ShapeMismatch {
            left: a.shape.clone(),
            right: b.shape.clone(),
        });
    }
    if a.variance[0] != b.variance[0]
        || a.variance.iter().any(|&v| v != a.variance[0])
        || b.variance.iter().any(|&v| v != b.variance[0])
    {
        return Err(TensorError::VarianceMismatch);
    }
    let deg = p + q;
    let scale = a.scale + b.scale;
    if deg > n {
        return Ok(Components::zeros(
            vec![n; n.min(deg)],
            vec![a.variance[0]; n.min(deg)],
            scale,
        ));
    }
    let mut out = Components::zeros(vec![n; deg], vec![a.variance[0]; deg], scale);
    // For antisymmetric inputs the full antisymmetrization with the
    // (p+q)!/(p!q!) prefactor reduces to the shuffle sum.
    let shape = out.shape.clone();
    let mut shuffles: Vec<(Vec<usize>, f64)> = Vec::with_capacity(binomial(deg, p));
    for_each_shuffle(p, q, |perm, sign| shuffles.push((perm.to_vec(), sign)));
    for idx in multi_indices(&shape) {
        let mut acc = 0.0;
        let mut ia = vec![0usize; p];
        let mut ib = vec![0usize; q];
        for (perm, sign) in &shuffles {
            for (slot, &pos) in perm.iter().enumerate() {
                if slot < p {
                    ia[slot] = idx[pos];
                } else {
                    ib[slot - p] = idx[pos];
                }
            }
            acc += sign * a.get(&ia) * b.get(&ib);
        }
        out.set(&idx, acc);
    }
    Ok(out)
}

impl Components {
    fn with_scale(mut self, s: ScaleDim) -> Components {
        self.scale = s;
        self
    }
}

/// Contract pairs of axes between two arrays. Each pair must couple a
/// covariant with a contravariant axis of equal length; scale dims add.
pub fn contract(
    a: &Components,
    b: &Components,
    axes: &[(usize, usize)],
) -> Result<Components, TensorError> {
    for &(ia, ib) in axes {
        if ia >= a.rank() || ib >= b.rank() {
            return Err(TensorError::AxisOutOfRange);
        }
        if a.shape[ia] != b.shape[ib] {
            return Err(TensorError::ShapeMismatch {
                left: vec![a.shape[ia]],
                right: vec![b.shape[ib]],
            });
        }
        if a.variance[ia] == b.variance[ib] {
            return Err(TensorError::VarianceMismatch);
        }
    }
    let a_free: Vec<usize> = (0..a.rank())
        .filter(|i| !axes.iter().any(|&(ia, _)| ia == *i))
        .collect();
    let b_free: Vec<usize> = (0..b.rank())
        .filter(|i| !axes.iter().any(|&(_, ib)| ib == *i))
        .collect();
    let mut shape = Vec::new();
    let mut variance = Vec::new();
    for &i in &a_free {
        shape.push(a.shape[i]);
        variance.push(a.variance[i]);
    }
    for &i in &b_free {
        shape.push(b.shape[i]);
        variance.push(b.variance[i]);
    }
    let mut out = Components::zeros(shape, variance, a.scale + b.scale);
    let sum_shape: Vec<usize> = axes.iter().map(|&(ia, _)| a.shape[ia]).collect();
    let out_shape = out.shape.clone();
    for idx in multi_indices(&out_shape) {
        let mut acc = 0.0;
        let mut ia_full = vec![0usize; a.rank()];
        let mut ib_full = vec![0usize; b.rank()];
        for sum_idx in multi_indices(&sum_shape) {
            for (k, &i) in a_free.iter().enumerate() {
                ia_full[i] = idx[k];
            }
            for (k, &i) in b_free.iter().enumerate() {
                ib_full[i] = idx[a_free.len() + k];
            }
            for (k, &(ia, ib)) in axes.iter().enumerate() {
                ia_full[ia] = sum_idx[k];
                ib_full[ib] = sum_idx[k];
            }
            acc += a.get(&ia_full) * b.get(&ib_full);
        }
        out.set(&idx, acc);
    }
    Ok(out)
}

/// Insertion i_B A of a k-vector B into a p-form A (k ≤ p), with the 1/k!
/// normalization demanded by the full-array storage convention.
pub fn insert(b: &Components, a: &Components) -> Result<Components, TensorError> {
    let k = b.rank();
    let p = a.rank();
    if k > p {
        return Err(TensorError::AxisOutOfRange);
    }
    let pairs: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
    let c = contract(b, a, &pairs)?;
    let norm = 1.0 / (1..=k).product::<usize>() as f64;
    Ok(c.scaled(norm))
}

/// Full pairing ⟨A, B⟩ = (1/p!)·A·B of a p-form with a p-vector.
pub fn pairing(a: &Components, b: &Components) -> Result<f64, TensorError> {
    if a.rank() != b.rank() {
        return Err(TensorError::ShapeMismatch {
            left: a.shape.clone(),
            right: b.shape.clone(),
        });
    }
    let c = insert(b, a)?;
    Ok(c.data[0])
}

/// Component of the wedge τ∧ω∧ω∧ω (degrees 1,2,2,2) at the index tuple
/// `at`, computed by the signed block-partition sum. Used for the 7-form
/// volume coefficient without materializing a rank-7 array.
pub fn volume_coefficient_1222(tau: &[f64], omega: &Components, at: &[usize; 7]) -> f64 {
    // Positions of the tuple distributed into blocks (1|2|2|2) via all
    // permutations of the 7 slots; each 2-block double-counts with equal
    // sign, compensated by 1/2³.
    let mut acc = 0.0;
    for_each_permutation(7, |perm, sign| {
        let t = tau[at[perm[0]]];
        if t == 0.0 {
            return;
        }
        let o1 = omega.get(&[at[perm[1]], at[perm[2]]]);
        let o2 = omega.get(&[at[perm[3]], at[perm[4]]]);
        let o3 = omega.get(&[at[perm[5]], at[perm[6]]]);
        acc += sign * t * o1 * o2 * o3;
    });
    acc / 8.0
}

/// Component of ω∧ω∧ω∧ω (four 2-form factors) at the index tuple `at`,
/// by the signed block-partition sum over S₈ with the 1/2⁴ compensation.
pub fn volume_coefficient_2222(omega: &Components, at: &[usize; 8]) -> f64 {
    let mut acc = 0.0;
    for_each_permutation(8, |perm, sign| {
        let o1 = omega.get(&[at[perm[0]], at[perm[1]]]);
        if o1 == 0.0 {
            return;
        }
        let o2 = omega.get(&[at[perm[2]], at[perm[3]]]);
        let o3 = omega.get(&[at[perm[4]], at[perm[5]]]);
        let o4 = omega.get(&[at[perm[6]], at[perm[7]]]);
        acc += sign * o1 * o2 * o3 * o4;
    });
    acc / 16.0
}
