//! Total derivatives, Euler operators, divergence extraction, the scaling
//! homotopy, gradient integration, and exact evaluation.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::{DiffPoly, FieldSet, JetError, JetVar, Monomial, MultiIndex, Rat};

impl DiffPoly {
    /// Total derivative D_{x^dir} (0-based direction) via the chain rule over
    /// jet variables. Linear and Leibniz by construction.
    pub fn total_derivative(&self, dir: usize) -> Result<DiffPoly, JetError> {
        let fs = self.fieldset().clone();
        if dir >= fs.dim() {
            return Err(JetError::BadDirection { dir: dir + 1, dim: fs.dim() });
        }
        let mut out = DiffPoly::zero(&fs);
        for (m, c) in self.terms() {
            for (v, e) in m.factors() {
                let bumped = v.deriv.bump(dir);
                if bumped.total() > fs.max_order() {
                    return Err(JetError::TruncationExceeded {
                        var: v.display(&fs),
                        order: bumped.total(),
                        cap: fs.max_order(),
                    });
                }
                let lowered = m.without_one(v).expect("factor present");
                let new_m = lowered.mul(&Monomial::var(JetVar::new(v.field, bumped)));
                out.add_term(new_m, c.clone() * Rat::from_integer((*e).into()));
            }
        }
        Ok(out)
    }

    /// Iterated total derivative D^J.
    pub fn total_derivative_multi(&self, j: &MultiIndex) -> Result<DiffPoly, JetError> {
        let mut p = self.clone();
        for dir in 0..j.dim() {
            for _ in 0..j.order(dir) {
                p = p.total_derivative(dir)?;
            }
        }
        Ok(p)
    }

    /// `(-D)^J`: iterated total derivative with sign `(-1)^{|J|}`.
    pub fn neg_derivative_multi(&self, j: &MultiIndex) -> Result<DiffPoly, JetError> {
        let p = self.total_derivative_multi(j)?;
        Ok(if j.total() % 2 == 0 { p } else { -p })
    }

    /// Euler operator (variational derivative) with respect to `field`:
    /// sum over multi-indices J of (-D)^J d(self)/d(field_J).
    ///
    /// Vanishes identically exactly when the density is a total divergence
    /// plus a constant.
    pub fn euler_operator(&self, field: usize) -> Result<DiffPoly, JetError> {
        let fs = self.fieldset().clone();
        if field >= fs.len() {
            return Err(JetError::UnknownField { name: format!("#{field}") });
        }
        let mut out = DiffPoly::zero(&fs);
        for v in self.jet_vars() {
            if v.field != field {
                continue;
            }
            let contrib = self.partial(&v).neg_derivative_multi(&v.deriv)?;
            out = out.checked_add(&contrib)?;
        }
        Ok(out)
    }

    /// Divergence of a vector of densities: sum_p D_p v^p.
    pub fn divergence(v: &[DiffPoly]) -> Result<DiffPoly, JetError> {
        assert!(!v.is_empty());
        let fs = v[0].fieldset().clone();
        assert_eq!(v.len(), fs.dim(), "one flux component per direction");
        let mut out = DiffPoly::zero(&fs);
        for (dir, comp) in v.iter().enumerate() {
            out = out.checked_add(&comp.total_derivative(dir)?)?;
        }
        Ok(out)
    }

    /// Writes the density as an exact total divergence, returning the flux
    /// vector `v` with `sum_p D_p v^p = self`.
    ///
    /// Preconditions (checked): the Euler image vanishes for every field and
    /// the constant term is zero. The representative is deterministic: while
    /// peeling a derivative ladder the lowest direction is peeled first, so
    /// flux lands in the earliest possible slot.
    pub fn divergence_extract(&self) -> Result<Vec<DiffPoly>, JetError> {
        let fs = self.fieldset().clone();
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(JetError::ConstantTerm { constant: c0.to_string() });
        }
        for f in 0..fs.len() {
            let e = self.euler_operator(f)?;
            if !e.is_zero() {
                return Err(JetError::NotDivergence {
                    field: fs.name(f).to_string(),
                    residual: e.display(),
                });
            }
        }

        // Integration-by-parts ladder: for each jet variable u_J of the
        // density, u_J*w telescopes as u_J*w = u*(-D)^J w + Div(flux), the
        // flux emitted one direction at a time in ascending direction order.
        // Summing over all (u, J) pairs leaves sum_f u^f*E_f(self) = 0, so the
        // density equals Div of the lambda-scaled flux.
        let mut flux = vec![DiffPoly::zero(&fs); fs.dim()];
        for v in self.jet_vars() {
            if v.deriv.is_zero() {
                continue;
            }
            let mut w = self.partial(&v);
            let mut j = v.deriv.clone();
            while let Some(dir) = j.min_positive_dir() {
                let j_lower = j.lower(dir).expect("positive entry");
                let jet = DiffPoly::var(&fs, JetVar::new(v.field, j_lower.clone()));
                flux[dir] = flux[dir].checked_add(&jet.checked_mul(&w)?)?;
                w = -w.total_derivative(dir)?;
                j = j_lower;
            }
        }
        // Radial scaling: each monomial of degree n picks up 1/n.
        let out: Vec<DiffPoly> = flux.iter().map(radial_integral).collect();

        // The identity is exact; re-check rather than trust the derivation.
        let recon = DiffPoly::divergence(&out)?;
        debug_assert_eq!(recon, *self, "divergence extraction must reconstruct");
        if recon != *self {
            return Err(JetError::NotDivergence {
                field: "<internal>".to_string(),
                residual: (&recon - self).display(),
            });
        }
        Ok(out)
    }

    /// Scaling homotopy: each monomial of total degree n acquires the factor
    /// 1/(n+k+1), i.e. the integral over [0,1] of lambda^{n+k}.
    pub fn scale_homotopy(&self, k: usize) -> DiffPoly {
        let mut out = DiffPoly::zero(self.fieldset());
        for (m, c) in self.terms() {
            let n = m.degree();
            out.add_term(
                m.clone(),
                c.clone() / Rat::from_integer(((n + k + 1) as i64).into()),
            );
        }
        out
    }

    /// Exact rational evaluation; the assignment must cover all jet variables.
    pub fn eval_at_jet(&self, assignment: &BTreeMap<JetVar, Rat>) -> Result<Rat, JetError> {
        let mut acc = Rat::zero();
        for (m, c) in self.terms() {
            let mut term = c.clone();
            for (v, e) in m.factors() {
                let val = assignment.get(v).ok_or_else(|| JetError::MissingAssignment {
                    var: v.display(self.fieldset()),
                })? ;
                for _ in 0..*e {
                    term *= val.clone();
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Floating-point evaluation; missing variables default to zero.
    pub fn eval_f64(&self, assignment: &dyn Fn(&JetVar) -> f64) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for (m, c) in self.terms() {
            let mut term = c.to_f64().unwrap_or(f64::NAN);
            for (v, e) in m.factors() {
                term *= assignment(v).powi(*e as i32);
            }
            acc += term;
        }
        acc
    }
}

/// Multiplies each monomial of degree n by 1/n. Constant terms are rejected
/// upstream, so n >= 1.
fn radial_integral(p: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero(p.fieldset());
    for (m, c) in p.terms() {
        let n = m.degree();
        assert!(n >= 1, "radial integral of a constant term");
        out.add_term(m.clone(), c.clone() / Rat::from_integer((n as i64).into()));
    }
    out
}

/// Reconstructs a potential from its gradient in the finite-dimensional space
/// of jet variables.
///
/// `partials` maps jet variables to the prescribed partial derivatives; any
/// jet variable absent from the map is treated as a parameter. Mixed-partial
/// symmetry over the prescribed variables is checked first; the potential is
/// then assembled by the radial homotopy over the prescribed variables and
/// normalized so that it vanishes when they are all zero.
pub fn jet_potential(
    fs: &Arc<FieldSet>,
    partials: &BTreeMap<JetVar, DiffPoly>,
) -> Result<DiffPoly, JetError> {
    let vars: Vec<&JetVar> = partials.keys().collect();
    for (i, va) in vars.iter().enumerate() {
        for vb in vars.iter().skip(i + 1) {
            let dab = partials[*va].partial(vb);
            let dba = partials[*vb].partial(va);
            if dab != dba {
                return Err(JetError::NonIntegrable {
                    var_a: va.display(fs),
                    var_b: vb.display(fs),
                });
            }
        }
    }
    // g = sum_i v_i * Int_0^1 P_i(lambda*v; params) dlambda: a monomial of
    // P_i with degree n in the prescribed variables contributes v_i*M/(n+1).
    let mut g = DiffPoly::zero(fs);
    for (v, p) in partials {
        for (m, c) in p.terms() {
            let n: usize = m
                .factors()
                .iter()
                .filter(|(w, _)| partials.contains_key(w))
                .map(|(_, e)| *e as usize)
                .sum();
            let scaled = c.clone() / Rat::from_integer(((n + 1) as i64).into());
            g.add_term(m.mul(&Monomial::var(v.clone())), scaled);
        }
    }
    for (v, p) in partials {
        debug_assert_eq!(&g.partial(v), p, "potential must match its gradient");
    }
    Ok(g)
}
