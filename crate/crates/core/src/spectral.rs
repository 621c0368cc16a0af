//! Symmetric eigendecomposition, graph-frequency ordering and perturbation
//! diagnostics.
//!
//! Two dense solvers are provided. [`eig_sym`] reduces to tridiagonal form
//! with Householder reflections and then runs implicit-shift QL; it is the
//! path used everywhere else in the crate. [`eig_sym_jacobi`] is a cyclic
//! Jacobi rotation scheme, slower but built from entirely different
//! arithmetic, and serves as a cross-check.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GsoKind;

/// Relative asymmetry tolerated before an input is rejected.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the input's Frobenius norm.
pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// QL iterations allowed per eigenvalue.
pub const QL_MAX_ITER: usize = 60;
/// Magnitude at or below which an entry counts as zero in [`sign_structure`].
pub const SIGN_TOL: f64 = 1e-10;

/// Eigenpairs of a symmetric matrix, values ascending, column `i` of
/// `vectors` paired with `values[i]`.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub values: Array1<f64>,
    pub vectors: Array2<f64>,
}

impl Eigendecomposition {
    /// `max |VᵀV - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.vectors.t().dot(&self.vectors);
        max_abs_deviation_from_identity(g.view())
    }

    /// `max |V·Diag(values)·Vᵀ - m|`.
    pub fn reconstruction_error(&self, m: &Array2<f64>) -> f64 {
        let r = rebuild(&self.vectors, self.values.view());
        (&r - m).iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }
}

fn max_abs_deviation_from_identity(g: ArrayView2<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for ((i, j), x) in g.indexed_iter() {
        let target = if i == j { 1.0 } else { 0.0 };
        worst = worst.max((x - target).abs());
    }
    worst
}

/// `V · Diag(d) · Vᵀ`.
pub fn rebuild(vectors: &Array2<f64>, diag: ArrayView1<f64>) -> Array2<f64> {
    let mut scaled = vectors.clone();
    for (mut col, &d) in scaled.columns_mut().into_iter().zip(diag.iter()) {
        col *= d;
    }
    scaled.dot(&vectors.t())
}

fn max_abs(m: &Array2<f64>) -> f64 {
    m.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()))
}

/// Checks squareness, finiteness and symmetry, then returns the averaged
/// `(M + Mᵀ)/2`.
fn symmetrized(m: &Array2<f64>) -> Result<Array2<f64>> {
    let (r, c) = m.dim();
    if r != c || r == 0 {
        return Err(Error::invalid(format!("expected a non-empty square matrix, got {r}x{c}")));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let scale = max_abs(m);
    let mut out = m.clone();
    for i in 0..r {
        for j in i + 1..r {
            let (a, b) = (m[[i, j]], m[[j, i]]);
            if (a - b).abs() > SYMMETRY_TOL * scale {
                return Err(Error::invalid(format!("matrix is not symmetric at ({i},{j}): {a} vs {b}")));
            }
            let avg = 0.5 * (a + b);
            out[[i, j]] = avg;
            out[[j, i]] = avg;
        }
    }
    Ok(out)
}

/// Eigendecomposition of a symmetric matrix by Householder tridiagonalization
/// followed by implicit QL with Wilkinson-style shifts.
pub fn eig_sym(m: &Array2<f64>) -> Result<Eigendecomposition> {
    let a = symmetrized(m)?;
    let n = a.nrows();
    let mut v: Vec<f64> = a.iter().copied().collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut v, &mut d, &mut e);

    // QL rotates pairs of eigenvector columns; keep them as rows so the
    // inner loop runs over contiguous memory.
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            z[i * n + k] = v[k * n + i];
        }
    }
    ql_implicit(n, &mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = Array1::from_iter(order.iter().map(|&i| d[i]));
    let mut vectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[[k, col]] = z[src * n + k];
        }
    }
    Ok(Eigendecomposition { values, vectors })
}

/// Householder reduction of the symmetric matrix stored row-major in `v` to
/// tridiagonal form. On return `d` holds the diagonal, `e[1..]` the
/// sub-diagonal, and `v` the accumulated orthogonal transform.
fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let idx = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = 0.0;
                v[idx(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[idx(j, i)] = f;
                g = e[j] + v[idx(j, j)] * f;
                for k in j + 1..i {
                    g += v[idx(k, j)] * d[k];
                    e[k] += v[idx(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[idx(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n.saturating_sub(1) {
        v[idx(n - 1, i)] = v[idx(i, i)];
        v[idx(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[idx(k, i + 1)] * v[idx(k, j)];
                }
                for k in 0..=i {
                    v[idx(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[idx(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
        v[idx(n - 1, j)] = 0.0;
    }
    v[idx(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL on the tridiagonal `(d, e)`; `z` holds eigenvectors as rows.
fn ql_implicit(n: usize, d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        // e[n-1] == 0 guarantees m < n.
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_ITER {
                    return Err(Error::NumericalFailure(format!(
                        "QL did not converge for eigenvalue {l} after {QL_MAX_ITER} iterations (residual {:e})",
                        e[l].abs()
                    )));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Cyclic Jacobi eigendecomposition, values ascending.
pub fn eig_sym_jacobi(m: &Array2<f64>) -> Result<Eigendecomposition> {
    let mut a = symmetrized(m)?;
    let n = a.nrows();
    let mut v = Array2::<f64>::eye(n);
    let target = JACOBI_TOL * frobenius(&a);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[[k, p]], a[[k, q]]);
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[[p, k]], a[[q, k]]);
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[[k, p]], v[[k, q]]);
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NumericalFailure(format!(
            "Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (off-diagonal norm {:e})",
            off_diagonal_norm(&a)
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].total_cmp(&a[[j, j]]));
    let values = Array1::from_iter(order.iter().map(|&i| a[[i, i]]));
    let mut vectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        vectors.column_mut(col).assign(&v.column(src));
    }
    Ok(Eigendecomposition { values, vectors })
}

fn frobenius(a: &Array2<f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn off_diagonal_norm(a: &Array2<f64>) -> f64 {
    let mut s = 0.0;
    for ((i, j), x) in a.indexed_iter() {
        if i != j {
            s += x * x;
        }
    }
    s.sqrt()
}

/// Eigenpairs of a graph-shift operator in graph-frequency order: ascending
/// for the Laplacian (lowest frequency 0 first), descending for the
/// adjacency matrix (largest eigenvalue first).
#[derive(Debug, Clone)]
pub struct OrderedSpectrum {
    pub kind: GsoKind,
    pub freqs: Array1<f64>,
    pub modes: Array2<f64>,
    pub sign_fixed: bool,
}

impl OrderedSpectrum {
    pub fn n(&self) -> usize {
        self.freqs.len()
    }

    /// Mode `i` (0-based frequency index).
    pub fn mode(&self, i: usize) -> ArrayView1<'_, f64> {
        self.modes.column(i)
    }
}

pub fn order_spectrum(m: &Array2<f64>, kind: GsoKind) -> Result<OrderedSpectrum> {
    Ok(order_eigendecomposition(eig_sym(m)?, kind))
}

/// Reorders an ascending decomposition into frequency order for `kind` and
/// fixes eigenvector signs. Ties keep the solver's output order.
pub fn order_eigendecomposition(eig: Eigendecomposition, kind: GsoKind) -> OrderedSpectrum {
    let n = eig.values.len();
    let mut order: Vec<usize> = (0..n).collect();
    match kind {
        GsoKind::Laplacian => order.sort_by(|&i, &j| eig.values[i].total_cmp(&eig.values[j])),
        GsoKind::Adjacency => order.sort_by(|&i, &j| eig.values[j].total_cmp(&eig.values[i])),
    }
    let freqs = Array1::from_iter(order.iter().map(|&i| eig.values[i]));
    let mut modes = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        modes.column_mut(col).assign(&eig.vectors.column(src));
    }
    fix_signs(&mut modes);
    OrderedSpectrum { kind, freqs, modes, sign_fixed: true }
}

/// Flips each column so its largest-magnitude entry (lowest index on ties)
/// is positive.
pub fn fix_signs(modes: &mut Array2<f64>) {
    for mut col in modes.columns_mut() {
        let mut best = 0usize;
        let mut best_abs = -1.0;
        for (i, x) in col.iter().enumerate() {
            if x.abs() > best_abs {
                best_abs = x.abs();
                best = i;
            }
        }
        if col[best] < 0.0 {
            col.mapv_inplace(|x| -x);
        }
    }
}

/// `Tr(C) / ‖C‖₂` for a positive semidefinite `C`.
pub fn effective_rank(c: &Array2<f64>) -> Result<f64> {
    let eig = eig_sym(c)?;
    let top = eig.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let trace: f64 = c.diag().sum();
    effective_rank_from_parts(trace, top)
}

pub(crate) fn effective_rank_from_parts(trace: f64, top: f64) -> Result<f64> {
    if !(top > 0.0) {
        return Err(Error::invalid("effective rank undefined for a zero (or negative) matrix"));
    }
    Ok((trace / top).max(1.0))
}

/// Davis–Kahan bound on `‖v̂ⱼ - v̄ⱼ‖₂` for the `j`-th (1-based) eigenvector:
/// `2^{3/2}·pert / min(β_{j-1} - β_j, β_j - β_{j+1})` with `β₀ = +∞` and
/// `β_{n+1} = -∞`. Returns `+∞` when that gap is zero.
///
/// Values above `√2` carry no information for sign-aligned unit vectors.
pub fn davis_kahan_bound(beta: &[f64], j: usize, pert: f64) -> Result<f64> {
    let n = beta.len();
    if j == 0 || j > n {
        return Err(Error::invalid(format!("index {j} outside 1..={n}")));
    }
    if !(pert >= 0.0) || !pert.is_finite() {
        return Err(Error::invalid(format!("perturbation norm must be finite and >= 0, got {pert}")));
    }
    if beta.windows(2).any(|w| !(w[0] >= w[1])) {
        return Err(Error::invalid("eigenvalues must be sorted in descending order"));
    }
    let above = if j >= 2 { beta[j - 2] - beta[j - 1] } else { f64::INFINITY };
    let below = if j < n { beta[j - 1] - beta[j] } else { f64::INFINITY };
    let gap = above.min(below);
    if gap <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2f64.powf(1.5) * pert / gap)
}

/// Sign pattern of a vector, with `|x| <= SIGN_TOL` treated as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignStructure {
    AllSameSign,
    Mixed,
    HasZeros,
}

pub fn sign_structure(v: ArrayView1<f64>) -> Result<SignStructure> {
    if v.iter().all(|&x| x == 0.0) {
        return Err(Error::invalid("sign structure of the zero vector is undefined"));
    }
    let pos = v.iter().any(|&x| x > SIGN_TOL);
    let neg = v.iter().any(|&x| x < -SIGN_TOL);
    let zeros = v.iter().any(|&x| x.abs() <= SIGN_TOL);
    Ok(match (pos && neg, zeros) {
        (true, _) => SignStructure::Mixed,
        (false, true) => SignStructure::HasZeros,
        (false, false) => SignStructure::AllSameSign,
    })
}

/// `‖v - (v)₊‖₂`, the norm of the negative part.
pub fn negative_part_norm(v: ArrayView1<f64>) -> f64 {
    v.iter().map(|&x| x.min(0.0).powi(2)).sum::<f64>().sqrt()
}

/// Largest eigenvalue magnitude of a symmetric matrix.
pub fn spectral_norm_sym(m: &Array2<f64>) -> Result<f64> {
    let eig = eig_sym(m)?;
    Ok(eig.values.iter().fold(0.0, |acc: f64, x| acc.max(x.abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use ndarray::array;

    fn check(eig: &Eigendecomposition, m: &Array2<f64>) {
        assert!(eig.orthonormality_error() <= 1e-8);
        assert!(eig.reconstruction_error(m) <= 1e-8 * (1.0 + max_abs(m)));
        assert!(eig.values.windows(2).into_iter().all(|w| w[0] <= w[1]));
    }

    #[test]
    fn identity_and_diagonal() {
        let i3 = Array2::<f64>::eye(3);
        for eig in [eig_sym(&i3).unwrap(), eig_sym_jacobi(&i3).unwrap()] {
            check(&eig, &i3);
            assert!(eig.values.iter().all(|&x| (x - 1.0).abs() < 1e-14));
        }
        let d = Array2::from_diag(&array![5.0, 2.0, 7.0]);
        for eig in [eig_sym(&d).unwrap(), eig_sym_jacobi(&d).unwrap()] {
            check(&eig, &d);
            assert_eq!(eig.values.to_vec(), vec![2.0, 5.0, 7.0]);
            for (col, basis) in [(0, 1), (1, 0), (2, 2)] {
                assert!((eig.vectors[[basis, col]].abs() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn path_laplacian_spectrum() {
        let l = Graph::path(3).unwrap().laplacian();
        for eig in [eig_sym(&l).unwrap(), eig_sym_jacobi(&l).unwrap()] {
            check(&eig, &l);
            for (got, want) in eig.values.iter().zip([0.0, 1.0, 3.0]) {
                assert!((got - want).abs() < 1e-12);
            }
            let v0 = eig.vectors.column(0);
            let s = 1.0 / 3f64.sqrt();
            assert!(v0.iter().all(|x| (x.abs() - s).abs() < 1e-12));
        }
    }

    #[test]
    fn one_by_one() {
        let m = array![[4.5]];
        let eig = eig_sym(&m).unwrap();
        assert_eq!(eig.values[0], 4.5);
        assert_eq!(eig.vectors[[0, 0]].abs(), 1.0);
    }

    #[test]
    fn rejects_asymmetric_and_nonfinite() {
        assert!(eig_sym(&array![[1.0, 2.0], [0.0, 1.0]]).is_err());
        assert!(eig_sym(&array![[f64::NAN, 0.0], [0.0, 1.0]]).is_err());
        assert!(eig_sym(&Array2::zeros((2, 3))).is_err());
        // tiny asymmetry is averaged away
        let m = array![[1.0, 2.0], [2.0 + 1e-13, 1.0]];
        check(&eig_sym(&m).unwrap(), &m);
    }

    #[test]
    fn solvers_agree_on_random_graphs() {
        for seed in 0..10 {
            let g = crate::graph::erdos_renyi(25, 0.3, seed).unwrap();
            for m in [g.laplacian(), g.adjacency()] {
                let a = eig_sym(&m).unwrap();
                let b = eig_sym_jacobi(&m).unwrap();
                check(&a, &m);
                check(&b, &m);
                for (x, y) in a.values.iter().zip(b.values.iter()) {
                    assert!((x - y).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn ordering_conventions() {
        let p3 = Graph::path(3).unwrap();
        let sp = order_spectrum(&p3.laplacian(), GsoKind::Laplacian).unwrap();
        for (got, want) in sp.freqs.iter().zip([0.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let sp = order_spectrum(&p3.adjacency(), GsoKind::Adjacency).unwrap();
        let r2 = 2f64.sqrt();
        for (got, want) in sp.freqs.iter().zip([r2, 0.0, -r2]) {
            assert!((got - want).abs() < 1e-12);
        }
        let k2 = Graph::path(2).unwrap();
        let sp = order_spectrum(&k2.adjacency(), GsoKind::Adjacency).unwrap();
        assert!((sp.freqs[0] - 1.0).abs() < 1e-14 && (sp.freqs[1] + 1.0).abs() < 1e-14);
        assert!(sp.sign_fixed);
    }

    #[test]
    fn sign_convention() {
        let mut m = array![[-0.8, -0.5, 0.6], [0.6, 0.5, 0.8]];
        fix_signs(&mut m);
        assert_eq!(m, array![[0.8, 0.5, 0.6], [-0.6, -0.5, 0.8]]);
    }

    #[test]
    fn effective_rank_examples() {
        assert!((effective_rank(&Array2::eye(5)).unwrap() - 5.0).abs() < 1e-12);
        let v = array![1.0, -2.0, 0.5];
        let outer = v.clone().insert_axis(ndarray::Axis(1)).dot(&v.insert_axis(ndarray::Axis(0)));
        assert!((effective_rank(&outer).unwrap() - 1.0).abs() < 1e-12);
        let d = Array2::from_diag(&array![4.0, 1.0, 1.0]);
        assert!((effective_rank(&d).unwrap() - 1.5).abs() < 1e-12);
        assert!(effective_rank(&Array2::zeros((3, 3))).is_err());
    }

    #[test]
    fn davis_kahan_examples() {
        let b = davis_kahan_bound(&[10.0, 1.0, 0.5], 1, 1.0).unwrap();
        assert!((b - 2f64.powf(1.5) / 9.0).abs() < 1e-15);
        assert!((b - 0.3143).abs() < 1e-4);
        assert_eq!(davis_kahan_bound(&[10.0, 1.0, 0.5], 2, 0.0).unwrap(), 0.0);
        assert_eq!(davis_kahan_bound(&[1.0, 1.0, 0.0], 1, 1.0).unwrap(), f64::INFINITY);
        assert!(davis_kahan_bound(&[0.0, 1.0], 1, 1.0).is_err());
        assert!(davis_kahan_bound(&[1.0, 0.0], 3, 1.0).is_err());
        // middle index uses the smaller of the two neighbouring gaps
        let b = davis_kahan_bound(&[10.0, 1.0, 0.5], 2, 1.0).unwrap();
        assert!((b - 2f64.powf(1.5) / 0.5).abs() < 1e-12);
    }

    #[test]
    fn sign_structures() {
        assert_eq!(sign_structure(array![1.0, 2.0, 3.0].view()).unwrap(), SignStructure::AllSameSign);
        assert_eq!(sign_structure(array![-1.0, -2.0].view()).unwrap(), SignStructure::AllSameSign);
        assert_eq!(sign_structure(array![1.0, -1.0, 0.5].view()).unwrap(), SignStructure::Mixed);
        assert_eq!(sign_structure(array![1.0, 0.0, 2.0].view()).unwrap(), SignStructure::HasZeros);
        assert_eq!(sign_structure(array![1.0, 1e-11, 2.0].view()).unwrap(), SignStructure::HasZeros);
        assert!(sign_structure(array![0.0, 0.0].view()).is_err());
    }
}
