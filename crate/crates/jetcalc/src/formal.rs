//! Formal expressions with fractional powers of order-zero field values.
//!
//! Verification operations accept coordinate maps like `sqrt(U)` or `log U`
//! through their declared derivatives. Those derivatives live outside the
//! polynomial algebra (1/(2 sqrt U), 1/U), but stay inside the algebra of
//! finite sums `c * prod_i U_i^{e_i} * (jet monomial)` with rational
//! exponents e_i on the undifferentiated fields. That algebra
//! is closed under ring operations and total derivatives, which is all the
//! verification paths need. It never feeds back into the exact core.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::{DiffPoly, FieldSet, JetError, JetVar, Monomial, MultiIndex, Rat};

/// Key of one term: rational exponents per field (order-zero part) plus an
/// ordinary monomial in positive-order jet variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct FKey {
    exps: Vec<Rat>,
    jets: Monomial,
}

/// A finite sum of fractional-power terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracPoly {
    fieldset: Arc<FieldSet>,
    terms: BTreeMap<FKey, Rat>,
}

impl FracPoly {
    pub fn zero(fs: &Arc<FieldSet>) -> Self {
        FracPoly { fieldset: fs.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(fs: &Arc<FieldSet>, c: Rat) -> Self {
        let mut p = Self::zero(fs);
        p.add_term(
            FKey { exps: vec![Rat::zero(); fs.len()], jets: Monomial::one() },
            c,
        );
        p
    }

    pub fn one(fs: &Arc<FieldSet>) -> Self {
        Self::constant(fs, Rat::one())
    }

    /// Power of an undifferentiated field: `U_field^e` with rational `e`.
    pub fn field_pow(fs: &Arc<FieldSet>, field: usize, e: Rat) -> Self {
        let mut exps = vec![Rat::zero(); fs.len()];
        exps[field] = e;
        let mut p = Self::zero(fs);
        p.add_term(FKey { exps, jets: Monomial::one() }, Rat::one());
        p
    }

    /// Embeds an ordinary differential polynomial.
    pub fn from_poly(p: &DiffPoly) -> Self {
        let fs = p.fieldset().clone();
        let mut out = Self::zero(&fs);
        for (m, c) in p.terms() {
            let mut exps = vec![Rat::zero(); fs.len()];
            let mut jets: Vec<(JetVar, u32)> = Vec::new();
            for (v, e) in m.factors() {
                if v.deriv.is_zero() {
                    exps[v.field] += Rat::from_integer((*e).into());
                } else {
                    jets.push((v.clone(), *e));
                }
            }
            out.add_term(FKey { exps, jets: Monomial::from_factors(jets) }, c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, k: FKey, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &FracPoly) -> FracPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> FracPoly {
        let mut out = Self::zero(&self.fieldset);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FracPoly) -> FracPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FracPoly) -> FracPoly {
        let mut out = Self::zero(&self.fieldset);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let exps = ka
                    .exps
                    .iter()
                    .zip(&kb.exps)
                    .map(|(a, b)| a.clone() + b.clone())
                    .collect();
                let jets = ka.jets.mul(&kb.jets);
                out.add_term(FKey { exps, jets }, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> FracPoly {
        let mut out = Self::zero(&self.fieldset);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c);
        }
        out
    }

    /// Total derivative: U^e differentiates to e U^{e-1} U_{x^dir}; jets by
    /// the ordinary chain rule.
    pub fn total_derivative(&self, dir: usize) -> Result<FracPoly, JetError> {
        let fs = &self.fieldset;
        if dir >= fs.dim() {
            return Err(JetError::BadDirection { dir: dir + 1, dim: fs.dim() });
        }
        let mut out = Self::zero(fs);
        for (k, c) in &self.terms {
            // Field-power part.
            for (f, e) in k.exps.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let mut exps = k.exps.clone();
                exps[f] = e.clone() - Rat::one();
                let fx = JetVar::new(f, MultiIndex::unit(fs.dim(), dir));
                let jets = k.jets.mul(&Monomial::var(fx));
                out.add_term(FKey { exps, jets }, c.clone() * e.clone());
            }
            // Positive-order jet part.
            for (v, e) in k.jets.factors() {
                let bumped = v.deriv.bump(dir);
                if bumped.total() > fs.max_order() {
                    return Err(JetError::TruncationExceeded {
                        var: v.display(fs),
                        order: bumped.total(),
                        cap: fs.max_order(),
                    });
                }
                let lowered = k.jets.without_one(v).expect("factor present");
                let jets = lowered.mul(&Monomial::var(JetVar::new(v.field, bumped)));
                out.add_term(
                    FKey { exps: k.exps.clone(), jets },
                    c.clone() * Rat::from_integer((*e).into()),
                );
            }
        }
        Ok(out)
    }

    /// Partial derivative with respect to the order-zero value of `field`.
    pub fn partial_field(&self, field: usize) -> FracPoly {
        let mut out = Self::zero(&self.fieldset);
        for (k, c) in &self.terms {
            let e = &k.exps[field];
            if e.is_zero() {
                continue;
            }
            let mut exps = k.exps.clone();
            exps[field] = e.clone() - Rat::one();
            out.add_term(FKey { exps, jets: k.jets.clone() }, c.clone() * e.clone());
        }
        out
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let fs = &self.fieldset;
        let mut parts = Vec::new();
        for (k, c) in &self.terms {
            let mut factors = vec![c.to_string()];
            for (f, e) in k.exps.iter().enumerate() {
                if !e.is_zero() {
                    factors.push(format!("{}^({})", fs.name(f), e));
                }
            }
            for (v, e) in k.jets.factors() {
                if *e == 1 {
                    factors.push(v.display(fs));
                } else {
                    factors.push(format!("{}^{}", v.display(fs), e));
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl fmt::Display for FracPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}
