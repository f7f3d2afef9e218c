//! Multi-matrix algebras ⊕_k M_{m_k}, presentations on arbitrary spaces,
//! commutants, and recovery of block structure from a spanning family.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::mat::{self, conj_mat, eye, hs_inner, max_abs, psd_pow_cut, vec_of, zeros, CMat, CVec, C};
use crate::{MvaError, Result};

/// Abstract finite-dimensional von Neumann algebra ⊕_k M_{m_k} in its canonical
/// (block-diagonal, multiplicity-one) matrix picture.  Canonical matrix units
/// are ordered by (block, row, column).
#[derive(Debug, Clone, PartialEq)]
pub struct MultiMatrixAlgebra {
    pub block_dims: Vec<usize>,
}

impl MultiMatrixAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Self {
        assert!(!block_dims.is_empty() && block_dims.iter().all(|&m| m > 0));
        MultiMatrixAlgebra { block_dims }
    }

    pub fn scalar() -> Self {
        Self::new(vec![1])
    }

    /// Side of the canonical block-diagonal matrices.
    pub fn ambient_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    /// Linear dimension Σ m_k².
    pub fn dim_vs(&self) -> usize {
        self.block_dims.iter().map(|m| m * m).sum()
    }

    pub fn block_offset(&self, k: usize) -> usize {
        self.block_dims[..k].iter().sum()
    }

    fn vs_offset(&self, k: usize) -> usize {
        self.block_dims[..k].iter().map(|m| m * m).sum()
    }

    pub fn unit_index(&self, k: usize, i: usize, j: usize) -> usize {
        self.vs_offset(k) + i * self.block_dims[k] + j
    }

    /// Canonical matrix unit e^{(k)}_{ij}.
    pub fn unit(&self, k: usize, i: usize, j: usize) -> CMat {
        let d = self.ambient_dim();
        let mut m = zeros(d, d);
        let o = self.block_offset(k);
        m[(o + i, o + j)] = mat::cone();
        m
    }

    /// All canonical matrix units in index order.
    pub fn units(&self) -> Vec<CMat> {
        let mut out = Vec::with_capacity(self.dim_vs());
        for (k, &m) in self.block_dims.iter().enumerate() {
            for i in 0..m {
                for j in 0..m {
                    out.push(self.unit(k, i, j));
                }
            }
        }
        out
    }

    /// Enumerate (block, row, col) triples in unit order.
    pub fn unit_labels(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (k, &m) in self.block_dims.iter().enumerate() {
            for i in 0..m {
                for j in 0..m {
                    out.push((k, i, j));
                }
            }
        }
        out
    }

    pub fn identity(&self) -> CMat {
        eye(self.ambient_dim())
    }

    /// Coordinates of a canonical matrix against the matrix units (entry extraction).
    pub fn coords(&self, x: &CMat) -> CVec {
        let mut v = CVec::zeros(self.dim_vs());
        for (u, (k, i, j)) in self.unit_labels().into_iter().enumerate() {
            let o = self.block_offset(k);
            v[u] = x[(o + i, o + j)];
        }
        v
    }

    pub fn from_coords(&self, v: &CVec) -> CMat {
        let d = self.ambient_dim();
        let mut x = zeros(d, d);
        for (u, (k, i, j)) in self.unit_labels().into_iter().enumerate() {
            let o = self.block_offset(k);
            x[(o + i, o + j)] = v[u];
        }
        x
    }

    /// Off-block content of a matrix claimed to lie in the algebra.
    pub fn membership_error(&self, x: &CMat) -> f64 {
        mat::diff_norm(&self.from_coords(&self.coords(x)), x)
    }

    /// Canonical non-normalized trace (sum of block traces).
    pub fn trace(&self, x: &CMat) -> C {
        x.trace()
    }

    /// Matrix of a linear map of the algebra in unit coordinates.
    pub fn op_from_alg_action(&self, f: impl Fn(&CMat) -> CMat) -> CMat {
        let units = self.units();
        let n = units.len();
        let mut m = zeros(n, n);
        for (j, e) in units.iter().enumerate() {
            m.set_column(j, &self.coords(&f(e)));
        }
        m
    }

    /// Coordinates of the adjoint as an antilinear map: coords(x*) = P conj(coords(x)).
    pub fn adjoint_perm(&self) -> CMat {
        let n = self.dim_vs();
        let mut p = zeros(n, n);
        for (u, (k, i, j)) in self.unit_labels().into_iter().enumerate() {
            p[(self.unit_index(k, j, i), u)] = mat::cone();
        }
        p
    }
}

/// A faithful unital *-representation of a `MultiMatrixAlgebra` on some space:
/// the images of the canonical matrix units plus dual data for pulling
/// operators back.
#[derive(Debug, Clone)]
pub struct AlgebraPresentation {
    pub alg: MultiMatrixAlgebra,
    pub images: Vec<CMat>,
    gram_pinv: CMat,
}

impl AlgebraPresentation {
    pub fn new(alg: MultiMatrixAlgebra, images: Vec<CMat>) -> Result<Self> {
        if images.len() != alg.dim_vs() {
            return Err(MvaError::Mismatch("AlgebraPresentation::new"));
        }
        let n = images.len();
        let mut gram = zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gram[(i, j)] = hs_inner(&images[j], &images[i]);
            }
        }
        let pres = AlgebraPresentation { alg, images, gram_pinv: mat::pinv(&gram, 1e-12) };
        let res = pres.star_hom_residual();
        if res > 1e-7 {
            return Err(MvaError::NotOfKind("a faithful *-homomorphism", res));
        }
        Ok(pres)
    }

    /// Canonical presentation: the algebra on its own canonical ambient space.
    pub fn canonical(alg: MultiMatrixAlgebra) -> Self {
        let images = alg.units();
        Self::new(alg, images).expect("canonical presentation is exact")
    }

    pub fn rep_dim(&self) -> usize {
        self.images[0].nrows()
    }

    /// Residual of the matrix-unit relations and adjoints under the images.
    pub fn star_hom_residual(&self) -> f64 {
        let labels = self.alg.unit_labels();
        let mut worst = 0.0f64;
        for (u, &(k, i, j)) in labels.iter().enumerate() {
            let adj = self.images[self.alg.unit_index(k, j, i)].adjoint();
            worst = worst.max(mat::diff_norm(&self.images[u], &adj));
            for (v, &(l, p, q)) in labels.iter().enumerate() {
                let prod = &self.images[u] * &self.images[v];
                let expect = if k == l && j == p {
                    self.images[self.alg.unit_index(k, i, q)].clone()
                } else {
                    zeros(self.rep_dim(), self.rep_dim())
                };
                worst = worst.max(mat::diff_norm(&prod, &expect));
            }
        }
        let mut ident = zeros(self.rep_dim(), self.rep_dim());
        for (u, &(_, i, j)) in labels.iter().enumerate() {
            if i == j {
                ident += &self.images[u];
            }
        }
        worst.max(mat::diff_norm(&ident, &eye(self.rep_dim())))
    }

    /// Push a canonical matrix forward into the representation.
    pub fn apply(&self, x: &CMat) -> CMat {
        let c = self.alg.coords(x);
        let mut out = zeros(self.rep_dim(), self.rep_dim());
        for (u, im) in self.images.iter().enumerate() {
            if c[u] != mat::czero() {
                out += im * c[u];
            }
        }
        out
    }

    /// Pull an operator on the representation space back to a canonical matrix
    /// (Hilbert-Schmidt least squares), together with the membership residual.
    pub fn pull_back(&self, y: &CMat) -> (CMat, f64) {
        let n = self.images.len();
        let mut b = CVec::zeros(n);
        for (u, im) in self.images.iter().enumerate() {
            b[u] = hs_inner(y, im);
        }
        let c = &self.gram_pinv * b;
        let x = self.alg.from_coords(&c);
        let res = mat::diff_norm(&self.apply(&x), y) / max_abs(y).max(1.0);
        (x, res)
    }

    pub fn membership_error(&self, y: &CMat) -> f64 {
        self.pull_back(y).1
    }
}

/// Orthonormalize a family of matrices in the Hilbert-Schmidt inner product,
/// dropping near-dependent members.
pub fn orthonormalize_span(mats: &[CMat], tol: f64) -> Vec<CMat> {
    let mut basis: Vec<CMat> = Vec::new();
    for m in mats {
        let mut v = m.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = hs_inner(&v, b);
                v -= b * c;
            }
        }
        let nrm = hs_inner(&v, &v).re.sqrt();
        if nrm > tol {
            basis.push(v.unscale(nrm));
        }
    }
    basis
}

/// Basis of the unital *-algebra generated by a family of operators.
pub fn generate_algebra(gens: &[CMat], tol: f64) -> Vec<CMat> {
    let d = gens[0].nrows();
    let mut seed: Vec<CMat> = vec![eye(d)];
    for g in gens {
        seed.push(g.clone());
        seed.push(g.adjoint());
    }
    let mut basis = orthonormalize_span(&seed, tol);
    loop {
        let mut next = basis.clone();
        for a in &basis {
            for b in &basis {
                next.push(a * b);
            }
        }
        let newb = orthonormalize_span(&next, tol);
        if newb.len() == basis.len() {
            return newb;
        }
        basis = newb;
    }
}

/// Basis of the commutant {X : [X, g] = 0 for all g and g*}.
pub fn commutant_basis(gens: &[CMat]) -> Vec<CMat> {
    let d = gens[0].nrows();
    let mut rows: Vec<CMat> = Vec::new();
    for g in gens.iter() {
        for h in [g.clone(), g.adjoint()] {
            // row-major vec: vec(XG) = (I ⊗ G^T) vec X, vec(GX) = (G ⊗ I) vec X
            rows.push(eye(d).kronecker(&h.transpose()) - h.kronecker(&eye(d)));
        }
    }
    let total_rows: usize = rows.iter().map(|r| r.nrows()).sum();
    let mut a = zeros(total_rows, d * d);
    let mut off = 0;
    for r in &rows {
        a.rows_mut(off, r.nrows()).copy_from(r);
        off += r.nrows();
    }
    mat::nullspace(&a, 1e-10)
        .into_iter()
        .map(|v| mat::mat_of(&v, d, d))
        .collect()
}

/// Intersection of two matrix spans (orthonormalized result).
pub fn intersect_spans(a: &[CMat], b: &[CMat], tol: f64) -> Vec<CMat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let d2 = a[0].nrows() * a[0].ncols();
    let mut m = zeros(d2, a.len() + b.len());
    for (j, x) in a.iter().enumerate() {
        m.set_column(j, &vec_of(x));
    }
    for (j, y) in b.iter().enumerate() {
        m.set_column(a.len() + j, &(-vec_of(y)));
    }
    let mut out = Vec::new();
    for v in mat::nullspace(&m, tol) {
        let mut x = zeros(a[0].nrows(), a[0].ncols());
        for (j, basis_mat) in a.iter().enumerate() {
            x += basis_mat * v[j];
        }
        out.push(x);
    }
    orthonormalize_span(&out, tol)
}

fn random_span_element(basis: &[CMat], hermitian: bool, rng: &mut ChaCha8Rng) -> CMat {
    use rand::Rng;
    let mut x = zeros(basis[0].nrows(), basis[0].ncols());
    for b in basis {
        let c = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        x += b * c;
    }
    if hermitian {
        x = (&x + x.adjoint()).scale(0.5);
    }
    let n = max_abs(&x).max(1e-12);
    x.unscale(n)
}

fn cluster_projections(h: &CMat, tol: f64) -> Vec<(f64, CMat)> {
    let (ev, u) = mat::herm_eig(h);
    let n = ev.len();
    let mut out: Vec<(f64, CMat)> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (ev[end] - ev[end - 1]).abs() <= tol {
            end += 1;
        }
        let uc = u.columns(start, end - start).into_owned();
        out.push((ev[start..end].iter().sum::<f64>() / (end - start) as f64, &uc * uc.adjoint()));
        start = end;
    }
    out
}

/// Recover the block structure of a *-closed operator span: returns a canonical
/// `MultiMatrixAlgebra` and matrix-unit images inside the span.
pub fn recover_structure(span: &[CMat], seed: u64) -> Result<AlgebraPresentation> {
    let basis = orthonormalize_span(span, 1e-10);
    let gens: Vec<CMat> = basis.clone();
    let comm = commutant_basis(&gens);
    let center = intersect_spans(&basis, &comm, 1e-9);
    if center.is_empty() {
        return Err(MvaError::Structure("empty center".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1));
    'attempt: for _ in 0..8 {
        let z = random_span_element(&center, true, &mut rng);
        let clusters = cluster_projections(&z, 1e-7);
        // central projections; each must idempotently close the span
        let mut block_dims = Vec::new();
        let mut all_units: Vec<CMat> = Vec::new();
        for (_, p) in &clusters {
            let compressed: Vec<CMat> = basis.iter().map(|b| p * b * p).collect();
            let bk = orthonormalize_span(&compressed, 1e-8);
            let mk2 = bk.len();
            let mk = (mk2 as f64).sqrt().round() as usize;
            if mk * mk != mk2 {
                continue 'attempt;
            }
            let a = random_span_element(&bk, true, &mut rng) + p.scale(3.0);
            let qs: Vec<CMat> = cluster_projections(&a, 1e-7)
                .into_iter()
                .filter(|(lam, _)| *lam > 1.0)
                .map(|(_, q)| q)
                .collect();
            if qs.len() != mk {
                continue 'attempt;
            }
            let c = random_span_element(&bk, false, &mut rng);
            // partial isometries q_1 -> q_i by polar decomposition
            let mut f: Vec<CMat> = Vec::with_capacity(mk);
            f.push(qs[0].clone());
            for q in qs.iter().skip(1) {
                let w = &qs[0] * &c * q;
                let u = &w * psd_pow_cut(&(w.adjoint() * &w), -0.5, 1e-9);
                if mat::diff_norm(&(u.adjoint() * &u), q) > 1e-7 {
                    continue 'attempt;
                }
                f.push(u);
            }
            for fi in &f {
                for fj in &f {
                    all_units.push(fi.adjoint() * fj);
                }
            }
            block_dims.push(mk);
        }
        let alg = MultiMatrixAlgebra::new(block_dims);
        match AlgebraPresentation::new(alg, all_units) {
            Ok(p) => {
                // images must span exactly the input
                let back = orthonormalize_span(
                    &[basis.clone(), p.images.clone()].concat(),
                    1e-8,
                );
                if back.len() != basis.len() {
                    return Err(MvaError::Structure(
                        "recovered units do not span the input".into(),
                    ));
                }
                return Ok(p);
            }
            Err(_) => continue 'attempt,
        }
    }
    Err(MvaError::Structure("randomized block separation failed".into()))
}

/// Full commutant of a represented algebra, with recovered structure.
pub fn commutant(pres: &AlgebraPresentation, seed: u64) -> Result<AlgebraPresentation> {
    let span = commutant_basis(&pres.images);
    recover_structure(&span, seed)
}

pub fn conj_presentation(images: &[CMat]) -> Vec<CMat> {
    images.iter().map(conj_mat).collect()
}

/// A linear map defined on the span of a family of operators by its values on
/// that family.  Application decomposes the argument in the span (least-norm
/// coefficients through the pinv of the HS Gram) and maps the coefficients
/// across; the decomposition residual is reported so callers can detect
/// arguments that escape the span.
pub struct SpanMap {
    sources: Vec<CMat>,
    targets: Vec<CMat>,
    gram_pinv: CMat,
    out_dim: usize,
}

impl SpanMap {
    pub fn new(sources: Vec<CMat>, targets: Vec<CMat>) -> Self {
        assert_eq!(sources.len(), targets.len());
        let n = sources.len();
        let mut g = mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = mat::hs_inner(&sources[j], &sources[i]);
            }
        }
        let out_dim = targets.first().map(|t| t.nrows()).unwrap_or(0);
        SpanMap { sources, targets, gram_pinv: mat::pinv(&g, 1e-12), out_dim }
    }

    pub fn apply(&self, a: &CMat) -> (CMat, f64) {
        let n = self.sources.len();
        let b = CVec::from_fn(n, |i, _| mat::hs_inner(a, &self.sources[i]));
        let c = &self.gram_pinv * b;
        let mut recon = mat::zeros(a.nrows(), a.ncols());
        let mut out = mat::zeros(self.out_dim, self.out_dim);
        for i in 0..n {
            recon += &self.sources[i] * c[i];
            out += &self.targets[i] * c[i];
        }
        let scale = mat::max_abs(a).max(1.0);
        (out, mat::diff_norm(&recon, a) / scale)
    }
}
