use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::{FieldSet, JetError, JetVar, Rat};

/// A multiset of jet variables: factors sorted, exponents positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(JetVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: JetVar) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_factors(mut factors: Vec<(JetVar, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(JetVar, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            if let Some(last) = merged.last_mut() {
                if last.0 == v {
                    last.1 += e;
                    continue;
                }
            }
            merged.push((v, e));
        }
        Monomial(merged)
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Total polynomial degree (with multiplicities).
    pub fn degree(&self) -> usize {
        self.0.iter().map(|(_, e)| *e as usize).sum()
    }

    /// Sum of derivative orders over all factors (with multiplicities).
    pub fn total_order(&self) -> usize {
        self.0
            .iter()
            .map(|(v, e)| v.order() * (*e as usize))
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut f = self.0.clone();
        f.extend(other.0.iter().cloned());
        Monomial::from_factors(f)
    }

    /// Exponent of `v` in this monomial.
    pub fn exponent(&self, v: &JetVar) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// Removes one power of `v`; `None` if absent.
    pub fn without_one(&self, v: &JetVar) -> Option<Monomial> {
        let mut f = self.0.clone();
        let pos = f.iter().position(|(w, _)| w == v)?;
        if f[pos].1 == 1 {
            f.remove(pos);
        } else {
            f[pos].1 -= 1;
        }
        Some(Monomial(f))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded order: total degree first, then lexicographic on the sorted
    /// factor list. Gives the unique normal form used for equality testing.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Differential polynomial: exact rational coefficients over jet monomials.
///
/// No zero coefficients are stored; terms live in a `BTreeMap` keyed by the
/// graded monomial order, so equal polynomials have identical representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffPoly {
    fieldset: Arc<FieldSet>,
    terms: BTreeMap<Monomial, Rat>,
}

impl DiffPoly {
    pub fn zero(fs: &Arc<FieldSet>) -> Self {
        DiffPoly { fieldset: fs.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(fs: &Arc<FieldSet>, c: Rat) -> Self {
        let mut p = Self::zero(fs);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(fs: &Arc<FieldSet>) -> Self {
        Self::constant(fs, Rat::one())
    }

    pub fn var(fs: &Arc<FieldSet>, v: JetVar) -> Self {
        debug_assert!(v.field < fs.len() && v.deriv.dim() == fs.dim());
        let mut p = Self::zero(fs);
        p.terms.insert(Monomial::var(v), Rat::one());
        p
    }

    pub fn monomial(fs: &Arc<FieldSet>, m: Monomial, c: Rat) -> Self {
        let mut p = Self::zero(fs);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn fieldset(&self) -> &Arc<FieldSet> {
        &self.fieldset
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Largest polynomial degree among terms; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Largest derivative order of any jet variable appearing.
    pub fn max_order(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.order()))
            .max()
            .unwrap_or(0)
    }

    /// Distinct jet variables appearing, in order.
    pub fn jet_vars(&self) -> Vec<JetVar> {
        let mut out: Vec<JetVar> = Vec::new();
        for m in self.terms.keys() {
            for (v, _) in m.factors() {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out.sort();
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
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

    pub fn scale(&self, c: &Rat) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero(&self.fieldset);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, r)| (m.clone(), r.clone() * c))
            .collect();
        DiffPoly { fieldset: self.fieldset.clone(), terms }
    }

    fn assert_same_fs(&self, other: &DiffPoly, context: &str) -> Result<(), JetError> {
        if self.fieldset != other.fieldset {
            return Err(JetError::FieldSetMismatch { context: context.to_string() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &DiffPoly) -> Result<DiffPoly, JetError> {
        self.assert_same_fs(other, "add")?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &DiffPoly) -> Result<DiffPoly, JetError> {
        self.assert_same_fs(other, "mul")?;
        let mut out = DiffPoly::zero(&self.fieldset);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// Partial derivative with respect to a single jet variable.
    pub fn partial(&self, v: &JetVar) -> DiffPoly {
        let mut out = DiffPoly::zero(&self.fieldset);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let lowered = m.without_one(v).expect("exponent checked");
            out.add_term(lowered, c.clone() * Rat::from_integer(e.into()));
        }
        out
    }

    /// True if no jet variable of `field` occurs.
    pub fn is_independent_of_field(&self, field: usize) -> bool {
        self.terms
            .keys()
            .all(|m| m.factors().iter().all(|(v, _)| v.field != field))
    }

    /// Substitutes each field of this polynomial's field set by an expression
    /// over `target` (same dimension): the jet variable `(i, J)` becomes
    /// `D^J(exprs[i])` computed in the target jet algebra.
    pub fn substitute_fields(
        &self,
        target: &Arc<FieldSet>,
        exprs: &[DiffPoly],
    ) -> Result<DiffPoly, JetError> {
        assert_eq!(exprs.len(), self.fieldset.len(), "one expression per field");
        assert_eq!(target.dim(), self.fieldset.dim(), "dimension must match");
        let mut cache: BTreeMap<JetVar, DiffPoly> = BTreeMap::new();
        let mut out = DiffPoly::zero(target);
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::constant(target, c.clone());
            for (v, e) in m.factors() {
                if !cache.contains_key(v) {
                    let expr = exprs[v.field].total_derivative_multi(&v.deriv)?;
                    cache.insert(v.clone(), expr);
                }
                let expr = &cache[v];
                for _ in 0..*e {
                    acc = acc.checked_mul(expr)?;
                }
            }
            out = out.checked_add(&acc)?;
        }
        Ok(out)
    }

    /// Renders with the field set's names; terms in the canonical order.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push_str("-");
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coeff_str = if abs.is_one() && !m.is_one() {
                String::new()
            } else {
                abs.to_string()
            };
            let mut parts: Vec<String> = Vec::new();
            if !coeff_str.is_empty() {
                parts.push(coeff_str);
            }
            for (v, e) in m.factors() {
                let name = v.display(&self.fieldset);
                if *e == 1 {
                    parts.push(name);
                } else {
                    parts.push(format!("{name}^{e}"));
                }
            }
            s.push_str(&parts.join("*"));
        }
        s
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        self.checked_add(rhs).expect("field set mismatch in +")
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        self.checked_add(&rhs.neg()).expect("field set mismatch in -")
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        self.checked_mul(rhs).expect("field set mismatch in *")
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&-Rat::one())
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        (&self).neg()
    }
}

/// Convenience builder: product of jet variables as a monomial DiffPoly.
#[allow(dead_code)]
pub fn mono(fs: &Arc<FieldSet>, vars: &[JetVar], c: Rat) -> DiffPoly {
    let m = Monomial::from_factors(vars.iter().map(|v| (v.clone(), 1)).collect());
    DiffPoly::monomial(fs, m, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rint, FieldRole, MultiIndex};

    fn one_field() -> Arc<FieldSet> {
        FieldSet::new(1, &[("u", FieldRole::Generic)])
    }

    #[test]
    fn arithmetic_and_normal_form() {
        let fs = one_field();
        let u = DiffPoly::var(&fs, JetVar::base(0, 1));
        let ux = DiffPoly::var(&fs, JetVar::new(0, MultiIndex::new(vec![1])));
        let p = &(&u * &u) + &ux;
        let q = &ux + &(&u * &u);
        assert_eq!(p, q);
        assert_eq!((&p - &p), DiffPoly::zero(&fs));
        assert_eq!(p.degree(), 2);
        assert_eq!(p.max_order(), 1);
    }

    #[test]
    fn partial_derivative() {
        let fs = one_field();
        let u = JetVar::base(0, 1);
        let p = DiffPoly::monomial(
            &fs,
            Monomial::from_factors(vec![(u.clone(), 3)]),
            rat(1, 2),
        );
        let dp = p.partial(&u);
        let expected = DiffPoly::monomial(
            &fs,
            Monomial::from_factors(vec![(u.clone(), 2)]),
            rat(3, 2),
        );
        assert_eq!(dp, expected);
    }

    #[test]
    fn zero_coefficients_dropped() {
        let fs = one_field();
        let u = DiffPoly::var(&fs, JetVar::base(0, 1));
        let z = &u - &u;
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
        let c = DiffPoly::constant(&fs, rint(0));
        assert!(c.is_zero());
    }
}
