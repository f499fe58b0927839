//! Linear Dirac geometry on `VV = V + V*` over an exact field.
//!
//! Skew forms and bivectors are stored as their sharp matrices in the
//! standard basis: column `j` of `b#` is `i_{e_j} b`, column `j` of `Z#` is
//! `Z(e_j*, .)`. Thus `b(e_i, e_j) = b#[j][i]`, and `e1* ^ e2*` in dimension two
//! has sharp matrix `[[0, -1], [1, 0]]`.
//!
//! Elements of `VV` are vectors of length `2n`: the `V` part first, then the
//! `V*` part. The split pairing is `<(v,x),(w,y)> = x(w) + y(v)`.

use crate::error::{ExteriorError, LinearError};
use crate::exterior::{Blade, DifferentialForm, MultivectorField};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// A skew bilinear form on `V`, stored as its sharp map `V -> V*`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewBilinear<F: Field> {
    sharp: Matrix<F>,
}

/// A bivector on `V`, stored as its sharp map `V* -> V`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bivector<F: Field> {
    sharp: Matrix<F>,
}

fn skew_from_pairs<F: Field>(n: usize, pairs: &[(usize, usize, F)]) -> Matrix<F> {
    let mut m: Matrix<F> = Matrix::zeros(n, n);
    for (i, j, c) in pairs {
        // c e_i ^ e_j: value c on (e_i, e_j) lands at [j][i]
        m[(*j, *i)] = m[(*j, *i)].add(c);
        m[(*i, *j)] = m[(*i, *j)].sub(c);
    }
    m
}

macro_rules! skew_common {
    ($t:ident) => {
        impl<F: Field> $t<F> {
            pub fn from_sharp(sharp: Matrix<F>) -> Result<Self, LinearError> {
                if !sharp.is_skew() {
                    return Err(LinearError::NotSkew);
                }
                Ok($t { sharp })
            }

            pub fn zero(n: usize) -> Self {
                $t { sharp: Matrix::zeros(n, n) }
            }

            /// `sum c * e_i ^ e_j` over the given `(i, j, c)` (0-based).
            pub fn from_pairs(n: usize, pairs: &[(usize, usize, F)]) -> Self {
                $t { sharp: skew_from_pairs(n, pairs) }
            }

            pub fn dim(&self) -> usize {
                self.sharp.rows()
            }

            pub fn sharp(&self) -> &Matrix<F> {
                &self.sharp
            }

            /// Value on the `(i, j)` basis pair.
            pub fn value(&self, i: usize, j: usize) -> F {
                self.sharp[(j, i)].clone()
            }

            pub fn add(&self, other: &Self) -> Self {
                $t { sharp: self.sharp.add(&other.sharp) }
            }

            pub fn sub(&self, other: &Self) -> Self {
                $t { sharp: self.sharp.sub(&other.sharp) }
            }

            pub fn neg(&self) -> Self {
                $t { sharp: self.sharp.neg() }
            }

            pub fn scale(&self, c: &F) -> Self {
                $t { sharp: self.sharp.scale(c) }
            }

            pub fn is_zero(&self) -> bool {
                self.sharp.is_zero()
            }

            pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> $t<G> {
                $t { sharp: self.sharp.map(f) }
            }

            pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<$t<G>, E> {
                Ok($t { sharp: self.sharp.try_map(f)? })
            }
        }
    };
}

skew_common!(SkewBilinear);
skew_common!(Bivector);

/// A linear subspace of `F^m`, canonicalized so that equality is structural.
///
/// The basis is kept in reduced row-echelon form (one basis vector per row),
/// which is the transpose of the reduced column-echelon spanning matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Matrix<F>,
}

impl<F: Field> Subspace<F> {
    pub fn span(ambient: usize, vectors: &[Vec<F>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_rows(vectors.to_vec());
        assert_eq!(m.cols(), ambient, "vector length");
        let r = m.rref();
        let rank = r.pivots.len();
        let basis = Matrix::from_fn(rank, ambient, |i, j| r.matrix[(i, j)].clone());
        Subspace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    /// Column span of an `m x r` matrix.
    pub fn column_span(m: &Matrix<F>) -> Self {
        Self::span(m.rows(), &m.columns())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> Vec<Vec<F>> {
        (0..self.basis.rows()).map(|i| self.basis.row(i)).collect()
    }

    /// The canonical `m x r` spanning matrix (reduced column-echelon form).
    pub fn spanning_matrix(&self) -> Matrix<F> {
        self.basis.transpose()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let mut vs = self.basis();
        vs.push(v.to_vec());
        Subspace::span(self.ambient, &vs).dim() == self.dim()
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let mut vs = self.basis();
        vs.extend(other.basis());
        Subspace::span(self.ambient, &vs)
    }

    pub fn intersection_dim(&self, other: &Self) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    pub fn intersection(&self, other: &Self) -> Self {
        // solve sum a_i u_i = sum b_j w_j
        let (a, b) = (self.basis(), other.basis());
        if a.is_empty() || b.is_empty() {
            return Self::zero(self.ambient);
        }
        let mut cols = a.clone();
        cols.extend(b.iter().map(|w| w.iter().map(F::neg).collect()));
        let m = Matrix::from_columns(&cols);
        let vs: Vec<Vec<F>> = m
            .nullspace()
            .into_iter()
            .map(|coeffs| {
                let mut v = vec![F::zero(); self.ambient];
                for (c, u) in coeffs.iter().zip(&a) {
                    for (x, y) in v.iter_mut().zip(u) {
                        *x = x.add(&c.mul(y));
                    }
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vs)
    }

    /// `self + other` is the whole space and the intersection is zero.
    pub fn is_complement_of(&self, other: &Self) -> bool {
        self.dim() + other.dim() == self.ambient && self.sum(other).dim() == self.ambient
    }

    pub fn map(&self, f: impl Fn(&[F]) -> Vec<F>) -> Self {
        let vs: Vec<Vec<F>> = self.basis().iter().map(|v| f(v)).collect();
        Subspace::span(self.ambient, &vs)
    }
}

/// Pairing `<(v,x),(w,y)> = x(w) + y(v)` on `VV`.
pub fn pairing<F: Field>(a: &[F], b: &[F]) -> Result<F, LinearError> {
    if a.len() != b.len() || a.len() % 2 != 0 {
        return Err(LinearError::Dimension(format!("pairing {} with {}", a.len(), b.len())));
    }
    let n = a.len() / 2;
    let mut acc = F::zero();
    for i in 0..n {
        acc = acc.add(&a[n + i].mul(&b[i])).add(&b[n + i].mul(&a[i]));
    }
    Ok(acc)
}

/// A Lagrangian subspace of `VV` for `V` of dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianSubspace<F: Field> {
    space: Subspace<F>,
}

impl<F: Field> LagrangianSubspace<F> {
    pub fn new(space: Subspace<F>) -> Result<Self, LinearError> {
        if is_lagrangian(&space) {
            Ok(LagrangianSubspace { space })
        } else {
            Err(LinearError::Dimension("subspace is not Lagrangian".into()))
        }
    }

    pub fn n(&self) -> usize {
        self.space.ambient() / 2
    }

    pub fn space(&self) -> &Subspace<F> {
        &self.space
    }

    /// `V` itself.
    pub fn tangent(n: usize) -> Self {
        let vs: Vec<Vec<F>> = (0..n).map(|i| unit(2 * n, i)).collect();
        LagrangianSubspace { space: Subspace::span(2 * n, &vs) }
    }

    /// `V*`.
    pub fn cotangent(n: usize) -> Self {
        let vs: Vec<Vec<F>> = (0..n).map(|i| unit(2 * n, n + i)).collect();
        LagrangianSubspace { space: Subspace::span(2 * n, &vs) }
    }

    /// If this subspace is transverse to `V*`, the form whose graph it is.
    pub fn as_form_graph(&self) -> Option<SkewBilinear<F>> {
        let n = self.n();
        let basis = self.space.basis();
        // canonical basis rows are (e_i, b# e_i) exactly when transverse to V*
        for (i, row) in basis.iter().enumerate() {
            if (0..n).any(|j| row[j] != if i == j { F::one() } else { F::zero() }) {
                return None;
            }
        }
        let sharp = Matrix::from_fn(n, n, |j, i| basis[i][n + j].clone());
        SkewBilinear::from_sharp(sharp).ok()
    }
}

fn unit<F: Field>(m: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); m];
    v[i] = F::one();
    v
}

/// Rank `n` and isotropic for the split pairing.
pub fn is_lagrangian<F: Field>(w: &Subspace<F>) -> bool {
    if w.ambient() % 2 != 0 || w.dim() != w.ambient() / 2 {
        return false;
    }
    let b = w.basis();
    for i in 0..b.len() {
        for j in i..b.len() {
            if !pairing(&b[i], &b[j]).expect("same ambient").is_zero() {
                return false;
            }
        }
    }
    true
}

fn split<F: Field>(e: &[F]) -> (&[F], &[F]) {
    e.split_at(e.len() / 2)
}

fn join<F: Field>(v: Vec<F>, xi: Vec<F>) -> Vec<F> {
    let mut out = v;
    out.extend(xi);
    out
}

/// `tau_b(v, x) = (v, x + b# v)`.
pub fn tau_form<F: Field>(beta: &SkewBilinear<F>, e: &[F]) -> Result<Vec<F>, LinearError> {
    let (v, xi) = split(e);
    if v.len() != beta.dim() || e.len() % 2 != 0 {
        return Err(LinearError::Dimension("tau_form".into()));
    }
    let bv = beta.sharp.mul_vec(v);
    Ok(join(v.to_vec(), xi.iter().zip(&bv).map(|(a, b)| a.add(b)).collect()))
}

/// `tau_Z(v, x) = (v + Z# x, x)`.
pub fn tau_bivector<F: Field>(z: &Bivector<F>, e: &[F]) -> Result<Vec<F>, LinearError> {
    let (v, xi) = split(e);
    if xi.len() != z.dim() || e.len() % 2 != 0 {
        return Err(LinearError::Dimension("tau_bivector".into()));
    }
    let zx = z.sharp.mul_vec(xi);
    Ok(join(v.iter().zip(&zx).map(|(a, b)| a.add(b)).collect(), xi.to_vec()))
}

pub fn tau_form_subspace<F: Field>(beta: &SkewBilinear<F>, w: &Subspace<F>) -> Result<Subspace<F>, LinearError> {
    if w.ambient() != 2 * beta.dim() {
        return Err(LinearError::Dimension("tau_form".into()));
    }
    Ok(w.map(|e| tau_form(beta, e).expect("checked")))
}

pub fn tau_bivector_subspace<F: Field>(z: &Bivector<F>, w: &Subspace<F>) -> Result<Subspace<F>, LinearError> {
    if w.ambient() != 2 * z.dim() {
        return Err(LinearError::Dimension("tau_bivector".into()));
    }
    Ok(w.map(|e| tau_bivector(z, e).expect("checked")))
}

/// `graph(b) = {(v, b# v)}`.
pub fn graph_form<F: Field>(beta: &SkewBilinear<F>) -> LagrangianSubspace<F> {
    let n = beta.dim();
    let vs: Vec<Vec<F>> = (0..n).map(|i| join(unit(n, i), beta.sharp.column(i))).collect();
    LagrangianSubspace { space: Subspace::span(2 * n, &vs) }
}

/// `graph(Z) = {(Z# x, x)}`.
pub fn graph_bivector<F: Field>(z: &Bivector<F>) -> LagrangianSubspace<F> {
    let n = z.dim();
    let vs: Vec<Vec<F>> = (0..n).map(|i| join(z.sharp.column(i), unit(n, i))).collect();
    LagrangianSubspace { space: Subspace::span(2 * n, &vs) }
}

/// `det(id + Z# b#)`.
pub fn i_z_determinant<F: Field>(beta: &SkewBilinear<F>, z: &Bivector<F>) -> Result<F, LinearError> {
    check_same(beta.dim(), z.dim())?;
    Ok(Matrix::identity(beta.dim()).add(&z.sharp.mul(&beta.sharp)).det())
}

/// Whether `id + Z# b#` is invertible, i.e. `b` lies in `I_Z`.
pub fn in_i_z<F: Field>(beta: &SkewBilinear<F>, z: &Bivector<F>) -> bool {
    i_z_determinant(beta, z).is_ok_and(|d| !d.is_zero())
}

fn check_same(a: usize, b: usize) -> Result<(), LinearError> {
    if a == b {
        Ok(())
    } else {
        Err(LinearError::Dimension(format!("{a} vs {b}")))
    }
}

/// `F(b)# = b# (id + Z# b#)^-1`.
pub fn f_map<F: Field>(beta: &SkewBilinear<F>, z: &Bivector<F>) -> Result<SkewBilinear<F>, LinearError> {
    check_same(beta.dim(), z.dim())?;
    let n = beta.dim();
    let m = Matrix::identity(n).add(&z.sharp.mul(&beta.sharp));
    let inv = m.inverse().ok_or(LinearError::NotInIZ)?;
    let sharp = beta.sharp.mul(&inv);
    debug_assert!(sharp.is_skew());
    SkewBilinear::from_sharp(sharp)
}

/// Kernel of `b#`: `(rank, kernel)`.
pub fn rank_and_kernel<F: Field>(beta: &SkewBilinear<F>) -> (usize, Subspace<F>) {
    let n = beta.dim();
    let ns = beta.sharp.nullspace();
    (n - ns.len(), Subspace::span(n, &ns))
}

/// The bivector `Z` in `/\^2 G` with `Z# = -(eta|_G#)^-1`.
///
/// With `g` the matrix whose columns span `G` and `A = g^T eta# g` (the
/// sharp of `eta|_G` in that frame), `Z# = -g A^-1 g^T`.
pub fn z_from_eta_g<F: Field>(eta: &SkewBilinear<F>, g: &Subspace<F>) -> Result<Bivector<F>, LinearError> {
    check_same(eta.dim(), g.ambient())?;
    let (_, kernel) = rank_and_kernel(eta);
    if !g.is_complement_of(&kernel) {
        return Err(LinearError::NotComplement);
    }
    z_from_frame(eta, &g.spanning_matrix())
}

/// As [`z_from_eta_g`] for an explicit frame of `G` (columns of `g`).
pub fn z_from_frame<F: Field>(eta: &SkewBilinear<F>, g: &Matrix<F>) -> Result<Bivector<F>, LinearError> {
    let gt = g.transpose();
    let restricted = gt.mul(&eta.sharp).mul(g);
    let inv = restricted.inverse().ok_or(LinearError::DegenerateRestriction)?;
    Bivector::from_sharp(g.mul(&inv).mul(&gt).neg())
}

/// `exp_eta(b) = eta + F(b)` with `Z` determined by `eta` and `G`.
pub fn dirac_exp<F: Field>(
    eta: &SkewBilinear<F>,
    g: &Subspace<F>,
    beta: &SkewBilinear<F>,
) -> Result<SkewBilinear<F>, LinearError> {
    let z = z_from_eta_g(eta, g)?;
    Ok(eta.add(&f_map(beta, &z)?))
}

/// A horizontal 2-form split along `V = G + K`.
#[derive(Clone, Debug, PartialEq)]
pub struct HorizontalDecomposition<F: Field> {
    /// `mu[a][b] = beta(k_a, g_b)`, the `K* (x) G*` block.
    pub mu: Matrix<F>,
    /// The `/\^2 G*` block, as a skew form on `G` in the frame of `G`.
    pub sigma: SkewBilinear<F>,
    k_frame: Matrix<F>,
    g_frame: Matrix<F>,
}

impl<F: Field> HorizontalDecomposition<F> {
    /// Rebuild the 2-form on `V` from `(mu, sigma)`.
    pub fn reassemble(&self) -> SkewBilinear<F> {
        let k = self.g_frame.cols();
        let n = self.g_frame.rows();
        // component matrix in the adapted frame (G first, then K)
        let c = Matrix::from_fn(n, n, |a, b| match (a < k, b < k) {
            (true, true) => self.sigma.value(a, b),
            (false, true) => self.mu[(a - k, b)].clone(),
            (true, false) => self.mu[(b - k, a)].neg(),
            (false, false) => F::zero(),
        });
        let basis = self.g_frame.hcat(&self.k_frame);
        let dual = basis.inverse().expect("adapted frame is a basis");
        // components in the standard basis: dual^T c dual; sharp is its transpose
        let comp = dual.transpose().mul(&c).mul(&dual);
        SkewBilinear::from_sharp(comp.transpose()).expect("skew")
    }

    /// `sigma` as a 2-form on `V`, vanishing whenever one argument is in `K`.
    pub fn sigma_on_v(&self) -> SkewBilinear<F> {
        HorizontalDecomposition {
            mu: Matrix::zeros(self.mu.rows(), self.mu.cols()),
            ..self.clone()
        }
        .reassemble()
    }
}

/// Components `C[a][b] = beta(b_a, b_b)` in the frame given by the columns of `basis`.
fn components_in_frame<F: Field>(beta: &SkewBilinear<F>, basis: &Matrix<F>) -> Matrix<F> {
    basis.transpose().mul(&beta.sharp.transpose()).mul(basis)
}

/// Split `beta` into its `K* (x) G*` and `/\^2 G*` parts.
pub fn decompose_horizontal<F: Field>(
    beta: &SkewBilinear<F>,
    k: &Subspace<F>,
    g: &Subspace<F>,
) -> Result<HorizontalDecomposition<F>, LinearError> {
    check_same(beta.dim(), k.ambient())?;
    if !k.is_complement_of(g) {
        return Err(LinearError::NotComplement);
    }
    let g_frame = g.spanning_matrix();
    let k_frame = k.spanning_matrix();
    let kd = g.dim();
    let n = beta.dim();
    let c = components_in_frame(beta, &g_frame.hcat(&k_frame));
    for a in kd..n {
        for b in kd..n {
            if !c[(a, b)].is_zero() {
                return Err(LinearError::NonHorizontal);
            }
        }
    }
    let mu = Matrix::from_fn(n - kd, kd, |a, b| c[(kd + a, b)].clone());
    let sigma_comp = Matrix::from_fn(kd, kd, |a, b| c[(a, b)].clone());
    let sigma = SkewBilinear::from_sharp(sigma_comp.transpose())?;
    Ok(HorizontalDecomposition { mu, sigma, k_frame, g_frame })
}

/// Whether the `/\^2 K*` block of `beta` vanishes.
pub fn is_horizontal_linear<F: Field>(beta: &SkewBilinear<F>, k: &Subspace<F>) -> bool {
    let km = k.spanning_matrix();
    components_in_frame(beta, &km).is_zero()
}

/// Graph of `eps` over `L` relative to the complement `R`, using an explicit
/// frame `l_frame` of `L` (rows) in which `eps` is expressed.
///
/// Each frame vector `l_b` is sent to `l_b + r_b` where `r_b` in `R` pairs
/// with `L` like `i_{l_b} eps`, via `R = L*`, `r -> <r, .>|_L`.
pub fn lagrangian_graph_in_frame<F: Field>(
    l_frame: &[Vec<F>],
    r: &LagrangianSubspace<F>,
    eps: &SkewBilinear<F>,
) -> Result<LagrangianSubspace<F>, LinearError> {
    let n = r.n();
    if l_frame.len() != n || eps.dim() != n {
        return Err(LinearError::Dimension("lagrangian_graph frame".into()));
    }
    let rb = r.space.basis();
    let p = Matrix::from_fn(n, n, |a, c| pairing(&rb[a], &l_frame[c]).expect("same ambient"));
    let pt_inv = p.transpose().inverse().ok_or(LinearError::NotTransverse)?;
    let y = pt_inv.mul(&eps.sharp);
    let vs: Vec<Vec<F>> = (0..n)
        .map(|b| {
            let mut v = l_frame[b].clone();
            for (a, ra) in rb.iter().enumerate() {
                let c = &y[(a, b)];
                if c.is_zero() {
                    continue;
                }
                for (x, w) in v.iter_mut().zip(ra) {
                    *x = x.add(&c.mul(w));
                }
            }
            v
        })
        .collect();
    LagrangianSubspace::new(Subspace::span(2 * n, &vs))
}

/// Graph of `eps` (a skew form on `L`, in the canonical basis of `L`) as a
/// Lagrangian subspace transverse to `R`.
pub fn lagrangian_graph<F: Field>(
    l: &LagrangianSubspace<F>,
    r: &LagrangianSubspace<F>,
    eps: &SkewBilinear<F>,
) -> Result<LagrangianSubspace<F>, LinearError> {
    check_same(l.n(), r.n())?;
    if !l.space.is_complement_of(&r.space) {
        return Err(LinearError::NotTransverse);
    }
    lagrangian_graph_in_frame(&l.space.basis(), r, eps)
}

/// `Phi_0(a) = {(v, i_v a)}`.
pub fn phi_zero<F: Field>(alpha: &SkewBilinear<F>) -> LagrangianSubspace<F> {
    let n = alpha.dim();
    lagrangian_graph(&LagrangianSubspace::tangent(n), &LagrangianSubspace::cotangent(n), alpha).expect("V, V* transverse")
}

/// `Phi_Z(b) = {(v + Z#(i_v b), i_v b)}`: the graph of `b` relative to `V + graph(Z)`.
pub fn phi_z<F: Field>(beta: &SkewBilinear<F>, z: &Bivector<F>) -> Result<LagrangianSubspace<F>, LinearError> {
    check_same(beta.dim(), z.dim())?;
    let n = beta.dim();
    lagrangian_graph(&LagrangianSubspace::tangent(n), &graph_bivector(z), beta)
}

/// `G + K*`, where `K* = G°` is the annihilator of `G` in `V*`.
pub fn g_plus_k_dual<F: Field>(g: &Subspace<F>) -> LagrangianSubspace<F> {
    let n = g.ambient();
    let annihilator = g.spanning_matrix().transpose().nullspace();
    let mut vs: Vec<Vec<F>> = g.basis().into_iter().map(|v| join(v, vec![F::zero(); n])).collect();
    vs.extend(annihilator.into_iter().map(|xi| join(vec![F::zero(); n], xi)));
    LagrangianSubspace { space: Subspace::span(2 * n, &vs) }
}

/// `Phi_{G+K*}(b~)`: graph over `graph(eta)` relative to `G + K*`, where `b~`
/// corresponds to `b` under `graph(eta) = V`, `(v, eta# v) -> v`.
pub fn phi_g_k<F: Field>(
    eta: &SkewBilinear<F>,
    g: &Subspace<F>,
    beta: &SkewBilinear<F>,
) -> Result<LagrangianSubspace<F>, LinearError> {
    let n = eta.dim();
    let frame: Vec<Vec<F>> = (0..n).map(|i| join(unit(n, i), eta.sharp.column(i))).collect();
    lagrangian_graph_in_frame(&frame, &g_plus_k_dual(g), beta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    fn push(&mut self, name: &'static str, ok: Option<bool>) {
        let status = match ok {
            Some(true) => CheckStatus::Pass,
            Some(false) => CheckStatus::Fail,
            None => CheckStatus::Skipped,
        };
        self.checks.push(LemmaCheck { name, status });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail).map(|c| c.name).collect()
    }
}

/// Evaluate both sides of each linear Dirac lemma for `(eta, G, beta)`.
///
/// Lemmas whose hypotheses fail (e.g. `beta` outside `I_Z`) are skipped.
pub fn verify_linear_lemmas<F: Field>(
    eta: &SkewBilinear<F>,
    g: &Subspace<F>,
    beta: &SkewBilinear<F>,
) -> Result<LemmaReport, LinearError> {
    let n = eta.dim();
    check_same(n, beta.dim())?;
    let z = z_from_eta_g(eta, g)?;
    let (_, kernel) = rank_and_kernel(eta);
    let minus_eta = eta.neg();
    let mut report = LemmaReport::default();

    // tau_{-eta}(G + K*) = graph(Z)
    let gk = g_plus_k_dual(g);
    let moved = tau_form_subspace(&minus_eta, gk.space())?;
    report.push("shift_to_graph_z", Some(&moved == graph_bivector(&z).space()));

    // tau_{-eta}(Phi_{G+K*}(b~)) = Phi_Z(b)
    let phi_gk = phi_g_k(eta, g, beta)?;
    let phi_zb = phi_z(beta, &z)?;
    report.push("shift_of_graph", Some(&tau_form_subspace(&minus_eta, phi_gk.space())? == phi_zb.space()));

    report.push(
        "lagrangian",
        Some(is_lagrangian(phi_gk.space()) && is_lagrangian(phi_zb.space()) && is_lagrangian(gk.space())),
    );

    // dim(Phi_{G+K*}(b~) cap V) = dim{v in K : i_v b in G* = K°}
    let v_space = LagrangianSubspace::<F>::tangent(n);
    let lhs = phi_gk.space().intersection_dim(v_space.space());
    let km = kernel.spanning_matrix();
    let restricted = km.transpose().mul(&beta.sharp).mul(&km);
    let rhs = km.cols() - restricted.rank();
    report.push("kernel_intersection", Some(lhs == rhs));

    // Phi_Z(b) transverse to V*  <=>  b in I_Z
    let in_iz = in_i_z(beta, &z);
    let cot = LagrangianSubspace::<F>::cotangent(n);
    let transverse = phi_zb.space().intersection_dim(cot.space()) == 0;
    report.push("transverse_iff_in_iz", Some(transverse == in_iz));

    if in_iz {
        let f = f_map(beta, &z)?;
        report.push("graph_is_f", Some(phi_zb.as_form_graph().as_ref() == Some(&f)));
        report.push("graph_f_is_phi_z", Some(graph_form(&f) == phi_zb));
        let exp = eta.add(&f);
        report.push("graph_of_exp", Some(graph_form(&exp) == phi_gk));
        // rank of the form whose graph is Phi_{G+K*}(b~) equals rank(eta) iff b horizontal
        let (rank_exp, _) = rank_and_kernel(&exp);
        let (rank_eta, _) = rank_and_kernel(eta);
        report.push("rank_iff_horizontal", Some((rank_exp == rank_eta) == is_horizontal_linear(beta, &kernel)));
    } else {
        for name in ["graph_is_f", "graph_f_is_phi_z", "graph_of_exp", "rank_iff_horizontal"] {
            report.push(name, None);
        }
    }
    Ok(report)
}

impl SkewBilinear<Scalar> {
    /// The pointwise sharp matrix of a 2-form field.
    pub fn from_form(beta: &DifferentialForm) -> Result<Self, ExteriorError> {
        if !beta.is_homogeneous_of(2) {
            return Err(ExteriorError::Inhomogeneous);
        }
        let pairs: Vec<(usize, usize, Scalar)> = beta
            .terms()
            .map(|(b, c)| {
                let idx = b.indices();
                (idx[0], idx[1], c.clone())
            })
            .collect();
        Ok(SkewBilinear::from_pairs(beta.dim(), &pairs))
    }

    pub fn to_form(&self) -> DifferentialForm {
        let n = self.dim();
        let mut out = DifferentialForm::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                let c = self.value(i, j);
                if !c.is_zero() {
                    out = &out + &DifferentialForm::monomial(n, Blade::from_indices(&[i, j]).expect("i < j"), c);
                }
            }
        }
        out
    }
}

impl Bivector<Scalar> {
    /// The pointwise sharp matrix of a bivector field.
    pub fn from_field(z: &MultivectorField) -> Result<Self, ExteriorError> {
        if !z.is_homogeneous_of(2) {
            return Err(ExteriorError::Inhomogeneous);
        }
        let pairs: Vec<(usize, usize, Scalar)> = z
            .terms()
            .map(|(b, c)| {
                let idx = b.indices();
                (idx[0], idx[1], c.clone())
            })
            .collect();
        Ok(Bivector::from_pairs(z.dim(), &pairs))
    }

    pub fn to_field(&self) -> MultivectorField {
        let n = self.dim();
        let mut out = MultivectorField::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                let c = self.value(i, j);
                if !c.is_zero() {
                    out = &out + &MultivectorField::monomial(n, Blade::from_indices(&[i, j]).expect("i < j"), c);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn e(n: usize, i: usize) -> Vec<Q> {
        unit(n, i)
    }

    fn form(n: usize, pairs: &[(usize, usize, i64)]) -> SkewBilinear<Q> {
        let p: Vec<_> = pairs.iter().map(|&(i, j, c)| (i, j, q(c))).collect();
        SkewBilinear::from_pairs(n, &p)
    }

    fn biv(n: usize, pairs: &[(usize, usize, i64)]) -> Bivector<Q> {
        let p: Vec<_> = pairs.iter().map(|&(i, j, c)| (i, j, q(c))).collect();
        Bivector::from_pairs(n, &p)
    }

    fn span(n: usize, idx: &[usize]) -> Subspace<Q> {
        Subspace::span(n, &idx.iter().map(|&i| e(n, i)).collect::<Vec<_>>())
    }

    #[test]
    fn sharp_convention() {
        let b = form(2, &[(0, 1, 1)]);
        assert_eq!(b.sharp(), &Matrix::from_rows(vec![vec![q(0), q(-1)], vec![q(1), q(0)]]));
        assert_eq!(b.value(0, 1), q(1));
    }

    #[test]
    fn pairing_examples() {
        let v1 = join(e(2, 0), vec![q(0); 2]);
        let xi1 = join(vec![q(0); 2], e(2, 0));
        let v2 = join(e(2, 1), vec![q(0); 2]);
        assert_eq!(pairing(&v1, &xi1).unwrap(), q(1));
        assert_eq!(pairing(&v1, &v2).unwrap(), q(0));
        let x = vec![q(2), q(3), q(5), q(7)];
        assert_eq!(pairing(&x, &x).unwrap(), q(2 * (5 * 2 + 7 * 3)));
        assert!(pairing(&x, &v1[..3]).is_err());
    }

    #[test]
    fn lagrangian_examples() {
        assert!(is_lagrangian(LagrangianSubspace::<Q>::tangent(3).space()));
        assert!(is_lagrangian(LagrangianSubspace::<Q>::cotangent(3).space()));
        let w = Subspace::span(4, &[join(e(2, 0), vec![q(0); 2]), join(vec![q(0); 2], e(2, 0))]);
        assert!(!is_lagrangian(&w));
    }

    #[test]
    fn tau_examples() {
        let b = form(2, &[(0, 1, 3)]);
        let cot = LagrangianSubspace::<Q>::cotangent(2);
        assert_eq!(&tau_form_subspace(&b, cot.space()).unwrap(), cot.space());
        let tan = LagrangianSubspace::<Q>::tangent(2);
        assert_eq!(tau_form_subspace(&b, tan.space()).unwrap(), graph_form(&b).space);
        let z = biv(2, &[(0, 1, 1)]);
        assert_eq!(&tau_bivector_subspace(&z, tan.space()).unwrap(), tan.space());
        assert_eq!(tau_bivector_subspace(&z, cot.space()).unwrap(), graph_bivector(&z).space);
    }

    #[test]
    fn i_z_examples() {
        let z = biv(2, &[(0, 1, 1)]);
        assert!(in_i_z(&SkewBilinear::zero(2), &z));
        assert!(!in_i_z(&form(2, &[(0, 1, 1)]), &z));
        // Z = e1^e2, b = e3*^e1* in n = 4: Z#b# nilpotent
        let z4 = biv(4, &[(0, 1, 1)]);
        assert!(in_i_z(&form(4, &[(2, 0, 5)]), &z4));
    }

    #[test]
    fn f_map_two_by_two_family() {
        let z = biv(2, &[(0, 1, 1)]);
        for t in [-3i64, -1, 0, 2, 5] {
            let b = form(2, &[(0, 1, t)]);
            let f = f_map(&b, &z).unwrap();
            // 2x2 oracle: (id + Z#b#) = (1 - t) id
            let expected = SkewBilinear::from_pairs(2, &[(0, 1, q(t) / q(1 - t))]);
            assert_eq!(f, expected);
        }
        assert_eq!(f_map(&form(2, &[(0, 1, 1)]), &z), Err(LinearError::NotInIZ));
        assert_eq!(f_map(&form(3, &[(0, 2, 4)]), &Bivector::zero(3)).unwrap(), form(3, &[(0, 2, 4)]));
        assert!(f_map(&SkewBilinear::zero(2), &z).unwrap().is_zero());
    }

    #[test]
    fn z_from_eta_examples() {
        let eta = form(4, &[(0, 1, 1)]);
        assert_eq!(z_from_eta_g(&eta, &span(4, &[0, 1])).unwrap(), biv(4, &[(0, 1, 1)]));
        assert_eq!(z_from_eta_g(&form(2, &[(0, 1, 1)]), &Subspace::full(2)).unwrap(), biv(2, &[(0, 1, 1)]));
        // G' = span(e1, e2 + e3): Z' = e1 ^ (e2 + e3)
        let g2 = Subspace::span(4, &[e(4, 0), vec![q(0), q(1), q(1), q(0)]]);
        assert_eq!(z_from_eta_g(&eta, &g2).unwrap(), biv(4, &[(0, 1, 1), (0, 2, 1)]));
        assert_eq!(z_from_eta_g(&eta, &span(4, &[0, 2])), Err(LinearError::NotComplement));
    }

    #[test]
    fn dirac_exp_examples() {
        let eta = form(4, &[(0, 1, 1)]);
        let g = span(4, &[0, 1]);
        assert_eq!(dirac_exp(&eta, &g, &SkewBilinear::zero(4)).unwrap(), eta);
        let s = 7;
        let beta = form(4, &[(2, 0, s)]);
        let exp = dirac_exp(&eta, &g, &beta).unwrap();
        let (rank, kernel) = rank_and_kernel(&exp);
        assert_eq!(rank, 2);
        assert_eq!(kernel, Subspace::span(4, &[vec![q(0), q(s), q(1), q(0)], e(4, 3)]));
        let wild = form(4, &[(2, 3, 1)]);
        assert_eq!(rank_and_kernel(&dirac_exp(&eta, &g, &wild).unwrap()).0, 4);
    }

    #[test]
    fn rank_kernel_examples() {
        let (r, k) = rank_and_kernel(&SkewBilinear::<Q>::zero(3));
        assert_eq!((r, k), (0, Subspace::full(3)));
        let (r, k) = rank_and_kernel(&form(4, &[(0, 1, 1)]));
        assert_eq!((r, k), (2, span(4, &[2, 3])));
        let (r, k) = rank_and_kernel(&form(4, &[(0, 1, 1), (2, 3, 1)]));
        assert_eq!((r, k.dim()), (4, 0));
    }

    #[test]
    fn decompose_examples() {
        let k = span(4, &[2, 3]);
        let g = span(4, &[0, 1]);
        let d = decompose_horizontal(&form(4, &[(2, 0, 3)]), &k, &g).unwrap();
        assert!(d.sigma.is_zero());
        assert_eq!(d.mu[(0, 0)], q(3));
        assert_eq!(d.reassemble(), form(4, &[(2, 0, 3)]));
        let d = decompose_horizontal(&form(4, &[(0, 1, 1)]), &k, &g).unwrap();
        assert!(d.mu.is_zero());
        assert_eq!(d.sigma, form(2, &[(0, 1, 1)]));
        assert_eq!(decompose_horizontal(&form(4, &[(2, 3, 1)]), &k, &g), Err(LinearError::NonHorizontal));
        assert_eq!(decompose_horizontal(&form(4, &[(0, 1, 1)]), &k, &k), Err(LinearError::NotComplement));
    }

    #[test]
    fn lagrangian_graph_examples() {
        let n = 2;
        let tan = LagrangianSubspace::<Q>::tangent(n);
        let cot = LagrangianSubspace::<Q>::cotangent(n);
        assert_eq!(lagrangian_graph(&tan, &cot, &SkewBilinear::zero(n)).unwrap(), tan);
        let b = form(2, &[(0, 1, 4)]);
        assert_eq!(phi_zero(&b), graph_form(&b));
        let z = biv(2, &[(0, 1, 1)]);
        for t in [-2i64, 0, 3] {
            let b = form(2, &[(0, 1, t)]);
            assert_eq!(phi_z(&b, &z).unwrap(), graph_form(&f_map(&b, &z).unwrap()));
        }
        assert_eq!(lagrangian_graph(&tan, &tan, &b), Err(LinearError::NotTransverse));
    }

    #[test]
    fn lemmas_on_standard_instance() {
        let eta = form(4, &[(0, 1, 1)]);
        let g = span(4, &[0, 1]);
        for beta in [form(4, &[(2, 0, 5)]), SkewBilinear::zero(4), form(4, &[(2, 3, 1), (0, 3, 2)])] {
            let report = verify_linear_lemmas(&eta, &g, &beta).unwrap();
            assert!(report.all_pass(), "{:?}", report.failures());
        }
    }
}
