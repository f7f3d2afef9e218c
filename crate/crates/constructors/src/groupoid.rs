//! Finite groupoids with a strictly positive measure on units, and the two
//! quantum-groupoid structures they carry: the function algebra with the
//! transposed convolution coproduct (commutative), and the left regular
//! representation of the convolution algebra (symmetric).

use hopf_bimodule::{MeasuredQuantumGroupoid, OperatorValuedWeight};
use mva_core::algebra::{orthonormalize_span, recover_structure, MultiMatrixAlgebra, SpanMap};
use mva_core::mat::{self, CMat, CVec, C};
use mva_core::weight::Weight;
use mva_core::Gns;

use crate::{ConError, Result};

/// A finite groupoid: arrows with source and range in a finite unit set, a
/// partial composition, an inversion, identity arrows, and strictly positive
/// weights on the units.
#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    pub units: usize,
    pub source: Vec<usize>,
    pub range: Vec<usize>,
    /// compose[g][h] is Some(gh) exactly when source(g) = range(h)
    pub compose: Vec<Vec<Option<usize>>>,
    pub inverse: Vec<usize>,
    /// identity arrow of each unit
    pub identity: Vec<usize>,
    pub measure: Vec<f64>,
}

impl FiniteGroupoid {
    pub fn arrows(&self) -> usize {
        self.source.len()
    }

    /// The one-arrow groupoid.
    pub fn one_element() -> Self {
        FiniteGroupoid {
            units: 1,
            source: vec![0],
            range: vec![0],
            compose: vec![vec![Some(0)]],
            inverse: vec![0],
            identity: vec![0],
            measure: vec![1.0],
        }
    }

    /// The cyclic group of order p as a one-unit groupoid with unit mass m.
    pub fn cyclic_group(p: usize, m: f64) -> Self {
        FiniteGroupoid {
            units: 1,
            source: vec![0; p],
            range: vec![0; p],
            compose: (0..p).map(|a| (0..p).map(|b| Some((a + b) % p)).collect()).collect(),
            inverse: (0..p).map(|a| (p - a) % p).collect(),
            identity: vec![0],
            measure: vec![m],
        }
    }

    /// The pair groupoid on n points: one arrow (a, b) for every ordered pair,
    /// with range a and source b.
    pub fn pair(measure: Vec<f64>) -> Self {
        let n = measure.len();
        let idx = |a: usize, b: usize| a * n + b;
        let mut compose = vec![vec![None; n * n]; n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    compose[idx(a, b)][idx(b, c)] = Some(idx(a, c));
                }
            }
        }
        FiniteGroupoid {
            units: n,
            source: (0..n * n).map(|g| g % n).collect(),
            range: (0..n * n).map(|g| g / n).collect(),
            compose,
            inverse: (0..n * n).map(|g| idx(g % n, g / n)).collect(),
            identity: (0..n).map(|u| idx(u, u)).collect(),
            measure,
        }
    }

    /// Exhaustive category, unit, inverse, and positivity checks.
    pub fn validate(&self) -> Result<()> {
        let na = self.arrows();
        let err = |s: String| Err(ConError::Groupoid(s));
        if self.range.len() != na
            || self.compose.len() != na
            || self.inverse.len() != na
            || self.identity.len() != self.units
            || self.measure.len() != self.units
        {
            return err("field lengths inconsistent".into());
        }
        if let Some(u) = self.measure.iter().position(|&m| m <= 0.0) {
            return err(format!("measure not strictly positive at unit {u}"));
        }
        for g in 0..na {
            if self.source[g] >= self.units || self.range[g] >= self.units {
                return err(format!("arrow {g} has an out-of-range endpoint"));
            }
        }
        for (u, &e) in self.identity.iter().enumerate() {
            if self.source[e] != u || self.range[e] != u {
                return err(format!("identity arrow of unit {u} has wrong endpoints"));
            }
        }
        for g in 0..na {
            for h in 0..na {
                match self.compose[g][h] {
                    Some(gh) => {
                        if self.source[g] != self.range[h] {
                            return err(format!("({g}, {h}) composed but not composable"));
                        }
                        if self.range[gh] != self.range[g] || self.source[gh] != self.source[h] {
                            return err(format!("composite of ({g}, {h}) has wrong endpoints"));
                        }
                    }
                    None => {
                        if self.source[g] == self.range[h] {
                            return err(format!("composable pair ({g}, {h}) has no composite"));
                        }
                    }
                }
            }
        }
        for g in 0..na {
            if self.compose[g][self.identity[self.source[g]]] != Some(g)
                || self.compose[self.identity[self.range[g]]][g] != Some(g)
            {
                return err(format!("unit law fails at arrow {g}"));
            }
            let gi = self.inverse[g];
            if self.inverse[gi] != g
                || self.source[gi] != self.range[g]
                || self.compose[g][gi] != Some(self.identity[self.range[g]])
                || self.compose[gi][g] != Some(self.identity[self.source[g]])
            {
                return err(format!("inverse law fails at arrow {g}"));
            }
        }
        for g in 0..na {
            for h in 0..na {
                if self.source[g] != self.range[h] {
                    continue;
                }
                for k in 0..na {
                    if self.source[h] != self.range[k] {
                        continue;
                    }
                    let left = self.compose[self.compose[g][h].unwrap()][k];
                    let right = self.compose[g][self.compose[h][k].unwrap()];
                    if left != right {
                        return err(format!("associativity fails on ({g}, {h}, {k})"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn diag(vals: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&x| C::new(x, 0.0)),
    ))
}

/// Functions on the groupoid with the coproduct transposed from composition,
/// range/source embeddings of functions on units, and fiber-counting invariant
/// weights.  The base measure is transported along ranges.
pub fn from_groupoid_commutative(g: &FiniteGroupoid) -> Result<MeasuredQuantumGroupoid> {
    g.validate()?;
    let na = g.arrows();
    let n_alg = MultiMatrixAlgebra::new(vec![1; g.units]);
    let nu = Weight::new(&n_alg, diag(&g.measure))?;
    let base = Gns::canonical(n_alg.clone(), nu)?;

    let m_alg = MultiMatrixAlgebra::new(vec![1; na]);
    let mut alpha = Vec::with_capacity(g.units);
    let mut beta = Vec::with_capacity(g.units);
    for u in 0..g.units {
        let av: Vec<f64> = (0..na).map(|x| if g.range[x] == u { 1.0 } else { 0.0 }).collect();
        let bv: Vec<f64> = (0..na).map(|x| if g.source[x] == u { 1.0 } else { 0.0 }).collect();
        alpha.push(diag(&av));
        beta.push(diag(&bv));
    }
    let t_left =
        OperatorValuedWeight::new(true, (0..na).map(|x| n_alg.unit(g.range[x], 0, 0)).collect());
    let t_right =
        OperatorValuedWeight::new(false, (0..na).map(|x| n_alg.unit(g.source[x], 0, 0)).collect());
    let phi_vals: Vec<f64> = (0..na).map(|x| g.measure[g.range[x]]).collect();
    let phi = Weight::new(&m_alg, diag(&phi_vals))?;
    let gns = Gns::canonical(m_alg, phi)?;

    let mut out = MeasuredQuantumGroupoid {
        base,
        gns,
        alpha,
        beta,
        gamma: Vec::new(),
        t_left,
        t_right,
    };
    let t = out.coproduct_space()?;
    out.gamma = (0..na)
        .map(|u| {
            let mut amb = mat::zeros(na * na, na * na);
            for x in 0..na {
                for y in 0..na {
                    if g.compose[x][y] == Some(u) {
                        amb[(na * x + y, na * x + y)] = mat::cone();
                    }
                }
            }
            t.space.compress(&amb)
        })
        .collect();
    Ok(out)
}

/// Left translation operators of the groupoid on functions over its arrows.
pub fn regular_rep(g: &FiniteGroupoid) -> Vec<CMat> {
    let na = g.arrows();
    (0..na)
        .map(|s| {
            let mut m = mat::zeros(na, na);
            for y in 0..na {
                if let Some(sy) = g.compose[s][y] {
                    m[(sy, y)] = mat::cone();
                }
            }
            m
        })
        .collect()
}

/// The convolution algebra in its left regular representation, with the
/// diagonal coproduct on translations, unit-restriction invariant weights,
/// and the same embedding on both legs.
pub fn from_groupoid_symmetric(g: &FiniteGroupoid) -> Result<MeasuredQuantumGroupoid> {
    g.validate()?;
    let na = g.arrows();
    let l = regular_rep(g);
    let pres = recover_structure(&orthonormalize_span(&l, 1e-10), 7)?;

    let mut omega = CVec::zeros(na);
    for (u, &e) in g.identity.iter().enumerate() {
        omega[e] = C::new(g.measure[u].sqrt(), 0.0);
    }
    let vals = CVec::from_fn(pres.images.len(), |i, _| {
        mat::inner(&(&pres.images[i] * &omega), &omega)
    });
    let phi = Weight::from_functional(&pres.alg, &vals)?;
    let gns = Gns::with_rep(pres.alg.clone(), phi, pres.images.clone(), omega)?;

    let n_alg = MultiMatrixAlgebra::new(vec![1; g.units]);
    let nu = Weight::new(&n_alg, diag(&g.measure))?;
    let base = Gns::canonical(n_alg.clone(), nu)?;
    let mut alpha = Vec::with_capacity(g.units);
    for u in 0..g.units {
        let (amb, res) = pres.pull_back(&l[g.identity[u]]);
        if res > 1e-8 {
            return Err(ConError::SpanEscape("unit embedding", res));
        }
        alpha.push(amb);
    }
    let beta = alpha.clone();

    // translations restrict to units: only identity arrows survive
    let t_targets: Vec<CMat> = (0..na)
        .map(|s| {
            g.identity
                .iter()
                .position(|&e| e == s)
                .map(|u| n_alg.unit(u, 0, 0))
                .unwrap_or_else(|| mat::zeros(g.units, g.units))
        })
        .collect();
    let t_map = SpanMap::new(l.clone(), t_targets);
    let t_images: Vec<CMat> = pres.images.iter().map(|x| t_map.apply(x).0).collect();
    let t_left = OperatorValuedWeight::new(true, t_images.clone());
    let t_right = OperatorValuedWeight::new(false, t_images);

    let mut out = MeasuredQuantumGroupoid {
        base,
        gns,
        alpha,
        beta,
        gamma: Vec::new(),
        t_left,
        t_right,
    };
    let t = out.coproduct_space()?;
    let gamma_map = SpanMap::new(
        l.clone(),
        l.iter().map(|ls| t.space.compress(&ls.kronecker(ls))).collect(),
    );
    out.gamma = pres.images.iter().map(|x| gamma_map.apply(x).0).collect();
    Ok(out)
}
