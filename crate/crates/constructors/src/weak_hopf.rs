//! Weak Hopf C*-algebras in a matrix-unit basis: axiom residuals, the linear
//! Haar solver, and the two conversion directions to and from measured
//! quantum groupoid bundles.

use antipode_engine::build_antipode;
use hopf_bimodule::{MeasuredQuantumGroupoid, OperatorValuedWeight, Report};
use mva_core::algebra::{orthonormalize_span, recover_structure, MultiMatrixAlgebra, SpanMap};
use mva_core::mat::{self, psd_pow_cut, CMat, CVec, C};
use mva_core::weight::Weight;
use mva_core::Gns;

use crate::{ConError, Result};

/// A weak Hopf C*-algebra over a multi-matrix algebra, with the coproduct,
/// counit, and antipode given on matrix units.  Coproduct values live in the
/// ambient Kronecker square of the defining ambient space.
#[derive(Debug, Clone)]
pub struct WeakHopfAlgebra {
    pub alg: MultiMatrixAlgebra,
    /// coproduct of each matrix unit on the ambient Kronecker square
    pub gamma: Vec<CMat>,
    /// counit values on matrix units
    pub counit: CVec,
    /// antipode image of each matrix unit, ambient
    pub kappa: Vec<CMat>,
}

/// Ambient position of the single nonzero entry of a matrix unit.
fn unit_pos(alg: &MultiMatrixAlgebra, u: usize) -> (usize, usize) {
    let (k, i, j) = alg.unit_labels()[u];
    let off = alg.block_offset(k);
    (off + i, off + j)
}

/// Coefficients of an element of the algebraic tensor square in the
/// matrix-unit basis, read off the ambient Kronecker positions.
pub fn kron_coords(alg: &MultiMatrixAlgebra, x: &CMat) -> CMat {
    let n = alg.dim_vs();
    let d = alg.ambient_dim();
    let mut c = mat::zeros(n, n);
    for u in 0..n {
        let (ru, cu) = unit_pos(alg, u);
        for v in 0..n {
            let (rv, cv) = unit_pos(alg, v);
            c[(u, v)] = x[(ru * d + rv, cu * d + cv)];
        }
    }
    c
}

/// Rebuild the ambient Kronecker element from tensor-square coefficients.
pub fn kron_from_coords(alg: &MultiMatrixAlgebra, c: &CMat) -> CMat {
    let n = alg.dim_vs();
    let d = alg.ambient_dim();
    let units = alg.units();
    let mut out = mat::zeros(d * d, d * d);
    for u in 0..n {
        for v in 0..n {
            if c[(u, v)].norm() > 0.0 {
                out += units[u].kronecker(&units[v]) * c[(u, v)];
            }
        }
    }
    out
}

impl WeakHopfAlgebra {
    pub fn gamma_of(&self, x: &CMat) -> CMat {
        let c = self.alg.coords(x);
        let mut out = self.gamma[0].scale(0.0);
        for (u, g) in self.gamma.iter().enumerate() {
            out += g * c[u];
        }
        out
    }

    pub fn kappa_of(&self, x: &CMat) -> CMat {
        let c = self.alg.coords(x);
        let mut out = self.kappa[0].scale(0.0);
        for (u, k) in self.kappa.iter().enumerate() {
            out += k * c[u];
        }
        out
    }

    pub fn eps_of(&self, x: &CMat) -> C {
        let c = self.alg.coords(x);
        (0..c.len()).map(|u| self.counit[u] * c[u]).sum()
    }

    /// Counit applied to both legs of a tensor-square element.
    pub fn eps_tensor(&self, x: &CMat) -> C {
        let c = kron_coords(&self.alg, x);
        let n = self.alg.dim_vs();
        let mut out = mat::czero();
        for u in 0..n {
            for v in 0..n {
                out += c[(u, v)] * self.counit[u] * self.counit[v];
            }
        }
        out
    }

    /// Multiply the antipode of the first leg against the second leg.
    fn contract_kappa_left(&self, x: &CMat) -> CMat {
        let c = kron_coords(&self.alg, x);
        let units = self.alg.units();
        let n = self.alg.dim_vs();
        let d = self.alg.ambient_dim();
        let mut out = mat::zeros(d, d);
        for u in 0..n {
            for v in 0..n {
                if c[(u, v)].norm() > 1e-15 {
                    out += &self.kappa[u] * &units[v] * c[(u, v)];
                }
            }
        }
        out
    }

    /// Multiply the first leg against the antipode of the second leg.
    fn contract_kappa_right(&self, x: &CMat) -> CMat {
        let c = kron_coords(&self.alg, x);
        let units = self.alg.units();
        let n = self.alg.dim_vs();
        let d = self.alg.ambient_dim();
        let mut out = mat::zeros(d, d);
        for u in 0..n {
            for v in 0..n {
                if c[(u, v)].norm() > 1e-15 {
                    out += &units[u] * &self.kappa[v] * c[(u, v)];
                }
            }
        }
        out
    }

    /// Target counital projection: first leg times the antipode of the second.
    pub fn eps_t(&self, x: &CMat) -> CMat {
        self.contract_kappa_right(&self.gamma_of(x))
    }

    /// Source counital projection: antipode of the first leg times the second.
    pub fn eps_s(&self, x: &CMat) -> CMat {
        self.contract_kappa_left(&self.gamma_of(x))
    }
}

/// Residuals of the coproduct, counit, and antipode axiom groups.
pub fn check_wha_axioms(w: &WeakHopfAlgebra) -> Report {
    let alg = &w.alg;
    let units = alg.units();
    let n = alg.dim_vs();
    let d = alg.ambient_dim();
    let mut rep = Report::new("weak Hopf axioms");

    let mut mult = 0.0f64;
    let mut star = 0.0f64;
    let mut member = 0.0f64;
    for u in 0..n {
        star = star.max(mat::diff_norm(
            &w.gamma_of(&units[u].adjoint()),
            &w.gamma[u].adjoint(),
        ));
        member = member.max(mat::diff_norm(
            &kron_from_coords(alg, &kron_coords(alg, &w.gamma[u])),
            &w.gamma[u],
        ));
        for v in 0..n {
            mult = mult.max(mat::diff_norm(
                &(&w.gamma[u] * &w.gamma[v]),
                &w.gamma_of(&(&units[u] * &units[v])),
            ));
        }
    }
    rep.push("coproduct is multiplicative", mult);
    rep.push("coproduct preserves adjoints", star);
    rep.push("coproduct lands in the tensor square", member);

    let gamma1 = w.gamma_of(&alg.identity());
    let eye = mat::eye(d);
    let mut counit = 0.0f64;
    for u in 0..n {
        for v in 0..n {
            let lhs = w.eps_tensor(&(units[u].kronecker(&eye) * &gamma1 * eye.kronecker(&units[v])));
            let rhs = w.eps_of(&(&units[u] * &units[v]));
            counit = counit.max((lhs - rhs).norm());
        }
    }
    rep.push("counit is weakly multiplicative", counit);

    let mut corep = 0.0f64;
    for u in 0..n {
        let c = kron_coords(alg, &w.gamma[u]);
        let mut left = mat::zeros(d, d);
        let mut right = mat::zeros(d, d);
        for a in 0..n {
            for b in 0..n {
                left += &units[a] * (c[(a, b)] * w.counit[b]);
                right += &units[b] * (c[(a, b)] * w.counit[a]);
            }
        }
        corep = corep
            .max(mat::diff_norm(&left, &units[u]))
            .max(mat::diff_norm(&right, &units[u]));
    }
    rep.push("counit reproduces through the coproduct", corep);

    let mut anti = 0.0f64;
    let mut invol = 0.0f64;
    for u in 0..n {
        for v in 0..n {
            anti = anti.max(mat::diff_norm(
                &w.kappa_of(&(&units[u] * &units[v])),
                &(&w.kappa[v] * &w.kappa[u]),
            ));
        }
        let twice = w.kappa_of(&w.kappa_of(&units[u].adjoint()).adjoint());
        invol = invol.max(mat::diff_norm(&twice, &units[u]));
    }
    rep.push("antipode is antimultiplicative", anti);
    rep.push("antipode-star is an involution", invol);

    let mut coid = 0.0f64;
    for u in 0..n {
        let c = kron_coords(alg, &w.gamma[u]);
        let mut lhs = mat::zeros(d * d, d * d);
        for a in 0..n {
            for b in 0..n {
                if c[(a, b)].norm() > 1e-15 {
                    lhs += w.contract_kappa_left(&w.gamma[a]).kronecker(&units[b]) * c[(a, b)];
                }
            }
        }
        let rhs = eye.kronecker(&units[u]) * &gamma1;
        coid = coid.max(mat::diff_norm(&lhs, &rhs));
    }
    rep.push("antipode contraction reproduces the unit coproduct", coid);

    let mut sq = 0.0f64;
    for u in 0..n {
        let t = w.eps_t(&units[u]);
        sq = sq.max(mat::diff_norm(&w.kappa_of(&w.kappa_of(&t)), &t));
    }
    rep.push("antipode squares to the identity on the target algebra", sq);
    rep
}

/// Solve the linear system characterizing the normalized Haar functional:
/// slicing the unit coproduct gives the unit, invariance under the antipode,
/// and the displayed exchange law; positivity and faithfulness are verified
/// on the solution.
pub fn solve_haar(w: &WeakHopfAlgebra) -> Result<CVec> {
    let alg = &w.alg;
    let units = alg.units();
    let n = alg.dim_vs();
    let d = alg.ambient_dim();
    let eye = mat::eye(d);
    let id_coords = alg.coords(&alg.identity());

    let mut rows: Vec<CVec> = Vec::new();
    let mut rhs: Vec<C> = Vec::new();

    // (id ⊗ h) Γ(1) = 1
    let g1 = kron_coords(alg, &w.gamma_of(&alg.identity()));
    for u in 0..n {
        rows.push(CVec::from_fn(n, |v, _| g1[(u, v)]));
        rhs.push(id_coords[u]);
    }
    // h ∘ κ = h
    for u in 0..n {
        let kc = alg.coords(&w.kappa[u]);
        let mut row = kc.clone();
        row[u] -= mat::cone();
        rows.push(row);
        rhs.push(mat::czero());
    }
    // (id ⊗ h)((1 ⊗ y)Γ(x)) = κ((id ⊗ h)(Γ(y)(1 ⊗ x)))
    let kappa_coords: Vec<CVec> = (0..n).map(|u| alg.coords(&w.kappa[u])).collect();
    for x in 0..n {
        for y in 0..n {
            let c = kron_coords(alg, &(eye.kronecker(&units[y]) * &w.gamma[x]));
            let cp = kron_coords(alg, &(&w.gamma[y] * eye.kronecker(&units[x])));
            for t in 0..n {
                let row = CVec::from_fn(n, |v, _| {
                    let mut val = c[(t, v)];
                    for u in 0..n {
                        val -= cp[(u, v)] * kappa_coords[u][t];
                    }
                    val
                });
                rows.push(row);
                rhs.push(mat::czero());
            }
        }
    }

    let mut a = mat::zeros(rows.len(), n);
    let mut b = mat::zeros(rows.len(), 1);
    for (r, row) in rows.iter().enumerate() {
        for cidx in 0..n {
            a[(r, cidx)] = row[cidx];
        }
        b[(r, 0)] = rhs[r];
    }
    let h = mat::lstsq(&a, &b);
    let res = mat::diff_norm(&(&a * &h), &b);
    if res > 1e-8 {
        return Err(ConError::Haar(format!("system inconsistent (residual {res:.3e})")));
    }
    if !mat::nullspace(&a, 1e-8).is_empty() {
        return Err(ConError::Haar("solution not unique".into()));
    }
    let h = CVec::from_fn(n, |u, _| h[(u, 0)]);
    let weight = Weight::from_functional(alg, &h).map_err(ConError::Core)?;
    let herm = mat::diff_norm(&weight.rho, &weight.rho.adjoint());
    let (ev, _) = mat::herm_eig(&weight.rho);
    if herm > 1e-9 || ev[0] <= 1e-10 {
        return Err(ConError::Haar(format!(
            "solution not faithful positive (hermiticity {herm:.3e}, min eigenvalue {:.3e})",
            ev[0]
        )));
    }
    Ok(h)
}

/// Build the measured quantum groupoid of a weak Hopf C*-algebra: the base is
/// the target counital algebra, the two legs are its inclusion and its
/// antipode twist, the weights are the two Haar slices of the coproduct, and
/// the coproduct is compressed onto the relative tensor square.
pub fn from_weak_hopf(w: &WeakHopfAlgebra) -> Result<MeasuredQuantumGroupoid> {
    let h = solve_haar(w)?;
    let alg = w.alg.clone();
    let units = alg.units();
    let n = alg.dim_vs();
    let phi = Weight::from_functional(&alg, &h)?;
    let gns = Gns::canonical(alg.clone(), phi.clone())?;

    let et_span: Vec<CMat> = (0..n).map(|u| w.eps_t(&units[u])).collect();
    let npres = recover_structure(&orthonormalize_span(&et_span, 1e-9), 5)?;
    let alpha: Vec<CMat> = npres.images.clone();
    let beta: Vec<CMat> = alpha.iter().map(|x| w.kappa_of(x)).collect();
    let nu_vals = CVec::from_fn(alpha.len(), |i, _| phi.value(&alpha[i]));
    let nu = Weight::from_functional(&npres.alg, &nu_vals)?;
    let base = Gns::canonical(npres.alg.clone(), nu)?;
    let n_units = npres.alg.units();

    let mut tl_images = Vec::with_capacity(n);
    let mut tr_images = Vec::with_capacity(n);
    let beta_map = SpanMap::new(beta.clone(), n_units.clone());
    for u in 0..n {
        let c = kron_coords(&alg, &w.gamma[u]);
        let mut left = mat::zeros(alg.ambient_dim(), alg.ambient_dim());
        let mut right = mat::zeros(alg.ambient_dim(), alg.ambient_dim());
        for a in 0..n {
            for b in 0..n {
                if c[(a, b)].norm() > 1e-15 {
                    left += &units[a] * (c[(a, b)] * h[b]);
                    right += &units[b] * (c[(a, b)] * h[a]);
                }
            }
        }
        let (tl, rl) = npres.pull_back(&left);
        let (tr, rr) = beta_map.apply(&right);
        if rl.max(rr) > 1e-7 {
            return Err(ConError::SpanEscape("Haar slices of the coproduct", rl.max(rr)));
        }
        tl_images.push(tl);
        tr_images.push(tr);
    }

    let mut out = MeasuredQuantumGroupoid {
        base,
        gns,
        alpha,
        beta,
        gamma: Vec::new(),
        t_left: OperatorValuedWeight::new(true, tl_images),
        t_right: OperatorValuedWeight::new(false, tr_images),
    };
    let t = out.coproduct_space()?;
    out.gamma = (0..n)
        .map(|u| {
            let c = kron_coords(&alg, &w.gamma[u]);
            let dh = out.gns.dim_h;
            let mut amb = mat::zeros(dh * dh, dh * dh);
            for a in 0..n {
                for b in 0..n {
                    if c[(a, b)].norm() > 1e-15 {
                        amb += out.gns.pi[a].kronecker(&out.gns.pi[b]) * c[(a, b)];
                    }
                }
            }
            t.space.compress(&amb)
        })
        .collect();
    Ok(out)
}

fn partial_trace_right(x: &CMat, d: usize) -> CMat {
    let mut out = mat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut s = mat::czero();
            for k in 0..d {
                s += x[(i * d + k, j * d + k)];
            }
            out[(i, j)] = s;
        }
    }
    out
}

/// Extract the weak Hopf structure of a finite bundle: the coproduct is
/// transported to the plain tensor square by the calibrated isometry, the
/// antipode is dressed into the Hopf antipode by the legs of the support
/// density, and the counit is solved from the counit law.
pub fn to_weak_hopf(g: &MeasuredQuantumGroupoid) -> Result<WeakHopfAlgebra> {
    let ap = build_antipode(g)?;
    let alg = g.m_alg().clone();
    let n = alg.dim_vs();
    let units = alg.units();
    let dh = g.gns.dim_h;
    let t = g.coproduct_space()?;
    let e_amb = &t.space.v * t.space.v.adjoint();

    // support density on the first leg and the base density against the
    // trace through alpha; both enter the calibration only up to scale
    let n_units = g.n_alg().units();
    let beta_map = SpanMap::new(g.beta_ops(), n_units.clone());
    let (n_o, res_no) = beta_map.apply(&partial_trace_right(&e_amb, dh));
    if res_no > 1e-7 {
        return Err(ConError::SpanEscape("support density of the second leg", res_no));
    }
    let tau_vals = CVec::from_fn(n_units.len(), |i, _| {
        g.gns.pi_apply(&g.alpha_of(&n_units[i])).trace()
    });
    let rho_tau = Weight::from_functional(g.n_alg(), &tau_vals)?.rho;
    let ti = psd_pow_cut(&rho_tau, -0.5, 1e-12);
    let dmat = &ti * &g.base.weight.rho * &ti;

    // calibrated isometry from the relative tensor square into the plain one
    let bno = g.gns.pi_apply(&g.beta_of(&psd_pow_cut(&n_o, -0.5, 1e-12)));
    let ad = g.gns.pi_apply(&g.alpha_of(&psd_pow_cut(&dmat, 0.5, 1e-12)));
    let targets = &e_amb * bno.kronecker(&ad);
    let i_raw = &targets * mat::pinv(&t.space.e, 1e-12);
    let well = mat::diff_norm(&(&i_raw * &t.space.e), &targets);
    if well > 1e-7 {
        return Err(ConError::SpanEscape("coproduct calibration", well));
    }
    // polish to an exact isometry; the defect stays within the calibration
    let pol = psd_pow_cut(&(i_raw.adjoint() * &i_raw), -0.5, 1e-10);
    let i_mat = &i_raw * pol;
    let iso = mat::diff_norm(&(i_mat.adjoint() * &i_mat), &mat::eye(t.dim));
    if iso > 1e-7 {
        return Err(ConError::SpanEscape("coproduct calibration isometry", iso));
    }

    // transported coproduct, with coefficients in the represented kron basis
    let mut kb = mat::zeros(dh * dh * dh * dh, n * n);
    for u in 0..n {
        for v in 0..n {
            kb.set_column(u * n + v, &mat::vec_of(&g.gns.pi[u].kronecker(&g.gns.pi[v])));
        }
    }
    let kb_pinv = mat::pinv(&kb, 1e-12);
    let mut gamma = Vec::with_capacity(n);
    for u in 0..n {
        let moved = &i_mat * &g.gamma[u] * i_mat.adjoint();
        let coef = &kb_pinv * mat::vec_of(&moved);
        let back = &kb * &coef;
        let resid = (&back - mat::vec_of(&moved)).norm();
        if resid > 1e-7 {
            return Err(ConError::SpanEscape("transported coproduct", resid));
        }
        let mut c = mat::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                c[(a, b)] = coef[a * n + b];
            }
        }
        gamma.push(kron_from_coords(&alg, &c));
    }
    let w_half = psd_pow_cut(&n_o, 0.5, 1e-12) * psd_pow_cut(&dmat, 0.5, 1e-12);
    let w_mhalf = psd_pow_cut(&n_o, -0.5, 1e-12) * psd_pow_cut(&dmat, -0.5, 1e-12);
    let a_p = g.alpha_of(&w_half);
    let a_m = g.alpha_of(&w_mhalf);
    let b_p = g.beta_of(&w_half);
    let b_m = g.beta_of(&w_mhalf);
    let kappa: Vec<CMat> = (0..n)
        .map(|u| &a_p * &b_m * ap.s_of(&units[u]) * &a_m * &b_p)
        .collect();

    // counit from the counit law on both legs
    let mut rows = mat::zeros(2 * n * n, n);
    let mut rhs = mat::zeros(2 * n * n, 1);
    for i in 0..n {
        let c = kron_coords(&alg, &gamma[i]);
        for u in 0..n {
            for v in 0..n {
                rows[(i * n + u, v)] += c[(u, v)];
                rows[(n * n + i * n + v, u)] += c[(u, v)];
            }
        }
        rhs[(i * n + i, 0)] = mat::cone();
        rhs[(n * n + i * n + i, 0)] = mat::cone();
    }
    let eps = mat::lstsq(&rows, &rhs);
    let resid = mat::diff_norm(&(&rows * &eps), &rhs);
    if resid > 1e-7 {
        return Err(ConError::SpanEscape("counit law", resid));
    }
    Ok(WeakHopfAlgebra {
        alg,
        gamma,
        counit: CVec::from_fn(n, |u, _| eps[(u, 0)]),
        kappa,
    })
}
