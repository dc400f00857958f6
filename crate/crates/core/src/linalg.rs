//! Small dense linear algebra on fixed-size vectors and matrices (N ≤ 4 in
//! practice): LU solves, inverses, and a real eigenvalue solver based on
//! Hessenberg reduction followed by shifted QR.

use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::math::{abs, copysign, sqrt};

/// A point of the phase space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State<const N: usize>(pub [f64; N]);

impl<const N: usize> State<N> {
    pub const fn new(components: [f64; N]) -> Self {
        State(components)
    }

    pub const fn zeros() -> Self {
        State([0.0; N])
    }

    pub fn as_array(&self) -> &[f64; N] {
        &self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(abs(*v)))
    }

    pub fn norm2(&self) -> f64 {
        sqrt(self.dot(self))
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = *self;
        out.0.iter_mut().for_each(|v| *v = f(*v));
        out
    }

    /// `a + t (b - a)`
    pub fn lerp(a: &Self, b: &Self, t: f64) -> Self {
        let mut out = *a;
        for k in 0..N {
            out.0[k] = a.0[k] + t * (b.0[k] - a.0[k]);
        }
        out
    }
}

impl<const N: usize> Default for State<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> From<[f64; N]> for State<N> {
    fn from(v: [f64; N]) -> Self {
        State(v)
    }
}

impl<const N: usize> Index<usize> for State<N> {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<const N: usize> IndexMut<usize> for State<N> {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl<const N: usize> Add for State<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<const N: usize> AddAssign for State<N> {
    fn add_assign(&mut self, rhs: Self) {
        for k in 0..N {
            self.0[k] += rhs.0[k];
        }
    }
}

impl<const N: usize> Sub for State<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<const N: usize> SubAssign for State<N> {
    fn sub_assign(&mut self, rhs: Self) {
        for k in 0..N {
            self.0[k] -= rhs.0[k];
        }
    }
}

impl<const N: usize> Mul<f64> for State<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.map(|v| v * rhs)
    }
}

impl<const N: usize> Mul<State<N>> for f64 {
    type Output = State<N>;
    fn mul(self, rhs: State<N>) -> State<N> {
        rhs * self
    }
}

impl<const N: usize> Neg for State<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|v| -v)
    }
}

/// Row-major square matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<const N: usize>(pub [[f64; N]; N]);

impl<const N: usize> Matrix<N> {
    pub const fn new(rows: [[f64; N]; N]) -> Self {
        Matrix(rows)
    }

    pub const fn zeros() -> Self {
        Matrix([[0.0; N]; N])
    }

    pub fn identity() -> Self {
        Self::diagonal(&[1.0; N])
    }

    pub fn diagonal(d: &[f64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = d[i];
        }
        m
    }

    pub fn from_columns(cols: &[State<N>; N]) -> Self {
        let mut m = Self::zeros();
        for j in 0..N {
            for i in 0..N {
                m.0[i][j] = cols[j][i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> State<N> {
        let mut c = State::zeros();
        for i in 0..N {
            c[i] = self.0[i][j];
        }
        c
    }

    pub fn row(&self, i: usize) -> State<N> {
        State(self.0[i])
    }

    pub fn mul_vec(&self, v: &State<N>) -> State<N> {
        let mut out = State::zeros();
        for i in 0..N {
            out[i] = (0..N).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                out.0[i][j] = (0..N).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..N {
            for j in 0..N {
                out.0[i][j] += other.0[i][j];
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .map(|row| row.iter().map(|v| abs(*v)).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .fold(0.0, |m, v| m.max(abs(*v)))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flat_map(|r| r.iter()).all(|v| v.is_finite())
    }

    /// LU factorization with partial pivoting; `None` when singular.
    pub fn lu(&self) -> Option<Lu<N>> {
        let mut a = self.0;
        let mut perm = [0usize; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..N {
            let mut piv = k;
            for i in k + 1..N {
                if abs(a[i][k]) > abs(a[piv][k]) {
                    piv = i;
                }
            }
            if abs(a[piv][k]) <= 1e-300 * scale || !a[piv][k].is_finite() {
                return None;
            }
            a.swap(k, piv);
            perm.swap(k, piv);
            for i in k + 1..N {
                let f = a[i][k] / a[k][k];
                a[i][k] = f;
                for j in k + 1..N {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        Some(Lu { a, perm })
    }

    pub fn solve(&self, b: &State<N>) -> Option<State<N>> {
        self.lu().map(|lu| lu.solve(b))
    }

    pub fn inverse(&self) -> Option<Self> {
        let lu = self.lu()?;
        let mut cols = [State::zeros(); N];
        for (j, col) in cols.iter_mut().enumerate() {
            let mut e = State::zeros();
            e[j] = 1.0;
            *col = lu.solve(&e);
        }
        Some(Self::from_columns(&cols))
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

pub struct Lu<const N: usize> {
    a: [[f64; N]; N],
    perm: [usize; N],
}

impl<const N: usize> Lu<N> {
    pub fn solve(&self, b: &State<N>) -> State<N> {
        let mut x = State::zeros();
        for i in 0..N {
            x[i] = b[self.perm[i]];
        }
        for i in 0..N {
            for j in 0..i {
                x[i] -= self.a[i][j] * x[j];
            }
        }
        for i in (0..N).rev() {
            for j in i + 1..N {
                x[i] -= self.a[i][j] * x[j];
            }
            x[i] /= self.a[i][i];
        }
        x
    }
}

/// A complex eigenvalue as `(re, im)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexRoot {
    pub re: f64,
    pub im: f64,
}

const HQR_MAX: usize = 8;

/// Eigenvalues of a general real matrix (N < 8): reduction to upper
/// Hessenberg form by stabilized elementary similarity transforms, then the
/// shifted QR iteration. Roots are returned unsorted.
pub fn eigenvalues_general<const N: usize>(m: &Matrix<N>) -> Result<[ComplexRoot; N]> {
    assert!(N < HQR_MAX, "eigenvalues_general supports N < {HQR_MAX}");
    // 1-based working copy
    let mut a = [[0.0f64; HQR_MAX]; HQR_MAX];
    for i in 0..N {
        for j in 0..N {
            a[i + 1][j + 1] = m.0[i][j];
        }
    }
    if !m.is_finite() {
        return Err(Error::domain("non-finite matrix entries"));
    }
    elmhes(&mut a, N);
    for i in 3..=N {
        for j in 1..i - 1 {
            a[i][j] = 0.0;
        }
    }
    let mut wr = [0.0; HQR_MAX];
    let mut wi = [0.0; HQR_MAX];
    hqr(&mut a, N, &mut wr, &mut wi)?;
    let mut out = [ComplexRoot { re: 0.0, im: 0.0 }; N];
    for k in 0..N {
        out[k] = ComplexRoot {
            re: wr[k + 1],
            im: wi[k + 1],
        };
    }
    Ok(out)
}

/// Roots of the monic polynomial `x^N + c[N-1] x^{N-1} + … + c[0]` from the
/// eigenvalues of its companion matrix.
pub fn polynomial_roots<const N: usize>(c: &[f64; N]) -> Result<[ComplexRoot; N]> {
    assert!(N < HQR_MAX);
    let mut a = [[0.0f64; HQR_MAX]; HQR_MAX];
    for j in 1..=N {
        a[1][j] = -c[N - j];
    }
    for i in 2..=N {
        a[i][i - 1] = 1.0;
    }
    let mut wr = [0.0; HQR_MAX];
    let mut wi = [0.0; HQR_MAX];
    hqr(&mut a, N, &mut wr, &mut wi)?;
    let mut out = [ComplexRoot { re: 0.0, im: 0.0 }; N];
    for k in 0..N {
        out[k] = ComplexRoot {
            re: wr[k + 1],
            im: wi[k + 1],
        };
    }
    Ok(out)
}

fn elmhes(a: &mut [[f64; HQR_MAX]; HQR_MAX], n: usize) {
    for m in 2..n {
        let mut x = 0.0;
        let mut i = m;
        for j in m..=n {
            if abs(a[j][m - 1]) > abs(x) {
                x = a[j][m - 1];
                i = j;
            }
        }
        if i != m {
            for j in m - 1..=n {
                let t = a[i][j];
                a[i][j] = a[m][j];
                a[m][j] = t;
            }
            for row in a.iter_mut().take(n + 1).skip(1) {
                row.swap(i, m);
            }
        }
        if x != 0.0 {
            for i in m + 1..=n {
                let mut y = a[i][m - 1];
                if y != 0.0 {
                    y /= x;
                    a[i][m - 1] = y;
                    for j in m..=n {
                        a[i][j] -= y * a[m][j];
                    }
                    for j in 1..=n {
                        a[j][m] += y * a[j][i];
                    }
                }
            }
        }
    }
}

#[allow(clippy::many_single_char_names)]
fn hqr(
    a: &mut [[f64; HQR_MAX]; HQR_MAX],
    n: usize,
    wr: &mut [f64; HQR_MAX],
    wi: &mut [f64; HQR_MAX],
) -> Result<()> {
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in (i.max(2) - 1)..=n {
            anorm += abs(a[i][j]);
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = abs(a[l - 1][l - 1]) + abs(a[l][l]);
                if s == 0.0 {
                    s = anorm;
                }
                if abs(a[l][l - 1]) + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
            } else {
                y = a[nn - 1][nn - 1];
                w = a[nn][nn - 1] * a[nn - 1][nn];
                if l == nn - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = sqrt(abs(q));
                    x += t;
                    if q >= 0.0 {
                        z = p + copysign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != 0.0 {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if its == 60 {
                        return Err(Error::NoSolution {
                            reason: "QR eigenvalue iteration did not converge".into(),
                            residual: abs(a[nn][nn - 1]),
                        });
                    }
                    if its == 10 || its == 20 || its == 40 {
                        t += x;
                        for i in 1..=nn {
                            a[i][i] -= x;
                        }
                        let s = abs(a[nn][nn - 1]) + abs(a[nn - 1][nn - 2]);
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    loop {
                        z = a[m][m];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s;
                        r = a[m + 2][m + 1];
                        let s = abs(p) + abs(q) + abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = abs(a[m][m - 1]) * (abs(q) + abs(r));
                        let v = abs(p) * (abs(a[m - 1][m - 1]) + abs(z) + abs(a[m + 1][m + 1]));
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m + 2..=nn {
                        a[i][i - 2] = 0.0;
                        if i != m + 2 {
                            a[i][i - 3] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = 0.0;
                            if k != nn - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = abs(p) + abs(q) + abs(r);
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = copysign(sqrt(p * p + q * q + r * r), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = a[k][j] + q * a[k + 1][j];
                                if k != nn - 1 {
                                    p += r * a[k + 2][j];
                                    a[k + 2][j] -= p * z;
                                }
                                a[k + 1][j] -= p * y;
                                a[k][j] -= p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x * a[i][k] + y * a[i][k + 1];
                                if k != nn - 1 {
                                    p += z * a[i][k + 2];
                                    a[i][k + 2] -= p * r;
                                }
                                a[i][k + 1] -= p * q;
                                a[i][k] -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn == 0 || l + 1 >= nn {
                break;
            }
        }
    }
    Ok(())
}

/// Real eigen-decomposition `A K = K diag(values)` with eigenvalues sorted
/// ascending and unit-length columns whose first non-negligible component is
/// positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: Matrix<N>,
}

/// Relative gap below which two eigenvalues count as coincident.
pub const DISTINCT_TOL: f64 = 1e-8;

/// Condition number of the eigenvector matrix above which a split is refused.
pub const MAX_CONDITION: f64 = 1e12;

impl<const N: usize> Eigen<N> {
    /// Sorts pairs, normalizes each vector and checks distinctness.
    pub fn from_pairs(mut pairs: [(f64, State<N>); N]) -> Result<Self> {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut values = [0.0; N];
        let mut cols = [State::zeros(); N];
        for (k, (lam, v)) in pairs.iter().enumerate() {
            values[k] = *lam;
            cols[k] = normalize(v);
        }
        check_distinct(&values)?;
        Ok(Eigen {
            values,
            vectors: Matrix::from_columns(&cols),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(abs(*v)))
    }

    /// `‖A K − K diag(λ)‖_∞`
    pub fn residual(&self, a: &Matrix<N>) -> f64 {
        let ak = a.mul_mat(&self.vectors);
        let kl = self.vectors.mul_mat(&Matrix::diagonal(&self.values));
        ak.sub(&kl).max_abs()
    }

    /// `K diag(f(λ)) K⁻¹`, refusing ill-conditioned eigenvector matrices.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> Result<Matrix<N>> {
        let inv = self.inverse_vectors()?;
        let mut d = [0.0; N];
        for k in 0..N {
            d[k] = f(self.values[k]);
        }
        Ok(self.vectors.mul_mat(&Matrix::diagonal(&d)).mul_mat(&inv))
    }

    pub fn inverse_vectors(&self) -> Result<Matrix<N>> {
        let inv = self.vectors.inverse().ok_or(Error::Decomposition {
            condition: f64::INFINITY,
        })?;
        let condition = self.vectors.norm_inf() * inv.norm_inf();
        if !(condition <= MAX_CONDITION) {
            return Err(Error::Decomposition { condition });
        }
        Ok(inv)
    }
}

pub fn normalize<const N: usize>(v: &State<N>) -> State<N> {
    let n = v.norm2();
    if n == 0.0 || !n.is_finite() {
        return *v;
    }
    let mut out = *v * (1.0 / n);
    if let Some(first) = out.iter().copied().find(|c| abs(*c) > 1e-14) {
        if first < 0.0 {
            out = -out;
        }
    }
    out
}

/// Rejects spectra whose minimum gap is below `DISTINCT_TOL · max|λ|`.
pub fn check_distinct(sorted: &[f64]) -> Result<()> {
    let scale = sorted.iter().fold(0.0f64, |m, v| m.max(abs(*v)));
    let tolerance = DISTINCT_TOL * scale;
    let gap = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if sorted.len() > 1 && !(gap >= tolerance && gap > 0.0) {
        return Err(Error::NotStrictlyHyperbolic { gap, tolerance });
    }
    Ok(())
}

/// Null vector of `A − λI` by inverse iteration with a slightly shifted
/// eigenvalue.
pub fn eigenvector_for<const N: usize>(a: &Matrix<N>, lambda: f64) -> Result<State<N>> {
    let scale = a.max_abs().max(abs(lambda)).max(1.0);
    let shift = lambda + 1e-10 * scale;
    let mut shifted = *a;
    for i in 0..N {
        shifted.0[i][i] -= shift;
    }
    let lu = shifted.lu().ok_or(Error::Decomposition {
        condition: f64::INFINITY,
    })?;
    let mut v = State([1.0; N]);
    for (k, c) in v.0.iter_mut().enumerate() {
        *c += 0.1 * k as f64;
    }
    for _ in 0..3 {
        let next = lu.solve(&v);
        let n = next.norm2();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Decomposition {
                condition: f64::INFINITY,
            });
        }
        v = next * (1.0 / n);
    }
    Ok(normalize(&v))
}

/// Eigen-decomposition of an arbitrary real matrix with real, distinct
/// spectrum. Complex parts larger than `imag_tol · max(1, |λ|)` are reported
/// as hyperbolicity loss.
pub fn eigen_general<const N: usize>(a: &Matrix<N>, imag_tol: f64) -> Result<Eigen<N>> {
    let roots = eigenvalues_general(a)?;
    let max_imag = roots.iter().fold(0.0f64, |m, r| m.max(abs(r.im)));
    let scale = roots.iter().fold(1.0f64, |m, r| m.max(abs(r.re)));
    if max_imag > imag_tol * scale {
        return Err(Error::HyperbolicityLoss {
            discriminant: f64::NAN,
            max_imag,
        });
    }
    let mut sorted = [0.0; N];
    for k in 0..N {
        sorted[k] = roots[k].re;
    }
    sorted.sort_by(f64::total_cmp);
    check_distinct(&sorted)?;
    let mut pairs = [(0.0, State::zeros()); N];
    for k in 0..N {
        pairs[k] = (sorted[k], eigenvector_for(a, sorted[k])?);
    }
    Eigen::from_pairs(pairs)
}

/// Eigenvalues of a real 2×2 matrix, ascending; complex pairs rejected.
pub fn eigen_2x2(a: &Matrix<2>) -> Result<Eigen<2>> {
    let tr = a.0[0][0] + a.0[1][1];
    let det = a.0[0][0] * a.0[1][1] - a.0[0][1] * a.0[1][0];
    let half = 0.5 * tr;
    let disc = half * half - det;
    if disc < 0.0 {
        return Err(Error::HyperbolicityLoss {
            discriminant: 4.0 * disc,
            max_imag: sqrt(-disc),
        });
    }
    let root = sqrt(disc);
    // stable pair
    let big = half + copysign(root, half);
    let small = if big != 0.0 { det / big } else { half - root };
    let (l1, l2) = if big < small { (big, small) } else { (small, big) };
    let vec_for = |lam: f64| -> State<2> {
        // rows (a00-λ, a01) and (a10, a11-λ); take the better conditioned one
        let r0 = (a.0[0][0] - lam, a.0[0][1]);
        let r1 = (a.0[1][0], a.0[1][1] - lam);
        if abs(r0.0) + abs(r0.1) >= abs(r1.0) + abs(r1.1) {
            State([r0.1, -r0.0])
        } else {
            State([-(r1.1), r1.0])
        }
    };
    Eigen::from_pairs([(l1, vec_for(l1)), (l2, vec_for(l2))])
}
