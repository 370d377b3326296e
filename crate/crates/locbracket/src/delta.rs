//! Distributions built from jet-polynomial coefficients and derivatives of
//! delta functions in up to three base points x, y, z.
//!
//! The normal form carries every coefficient at x and every delta factor on
//! the pairs (x-y) and (x-z). Rebasing uses the Leibniz/Taylor identity
//!
//!   f(y) delta^{(c)}(x-y) = sum_{r<=c} C(c,r) (D^r f)(x) delta^{(c-r)}(x-y)
//!
//! per direction, the parity flip delta^{(c)}(y-x) = (-1)^{|c|}
//! delta^{(c)}(x-y), and the contraction of a (y-z) factor against an
//! existing (x-y) or (x-z) factor. delta^{(l)}(x-y) always means the l-th
//! derivative in x.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use jetcalc::{DiffPoly, FieldSet, MultiIndex, Rat};
use num_traits::Zero;

use crate::BracketError;

/// Base point of a coefficient or a delta-factor argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Base {
    X,
    Y,
    Z,
}

/// One unnormalized term: a jet coefficient based at `base` times delta
/// factors `delta^{(J)}(a - b)`.
#[derive(Debug, Clone)]
pub struct RawDeltaTerm {
    pub coeff: DiffPoly,
    pub base: Base,
    pub factors: Vec<(Base, Base, MultiIndex)>,
}

/// A sum of raw terms.
#[derive(Debug, Clone, Default)]
pub struct RawDelta {
    pub terms: Vec<RawDeltaTerm>,
}

impl RawDelta {
    pub fn push(&mut self, coeff: DiffPoly, base: Base, factors: Vec<(Base, Base, MultiIndex)>) {
        if !coeff.is_zero() {
            self.terms.push(RawDeltaTerm { coeff, base, factors });
        }
    }
}

/// Normal-form distribution: for each key `(a, None)` a term
/// `coeff(x) * delta^{(a)}(x-y)`, for `(a, Some(b))` a term
/// `coeff(x) * delta^{(a)}(x-y) * delta^{(b)}(x-z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaExpr {
    fieldset: Arc<FieldSet>,
    terms: BTreeMap<(MultiIndex, Option<MultiIndex>), DiffPoly>,
}

impl DeltaExpr {
    pub fn zero(fs: &Arc<FieldSet>) -> Self {
        DeltaExpr { fieldset: fs.clone(), terms: BTreeMap::new() }
    }

    pub fn fieldset(&self) -> &Arc<FieldSet> {
        &self.fieldset
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, Option<MultiIndex>), &DiffPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, dy: &MultiIndex, dz: Option<&MultiIndex>) -> DiffPoly {
        self.terms
            .get(&(dy.clone(), dz.cloned()))
            .cloned()
            .unwrap_or_else(|| DiffPoly::zero(&self.fieldset))
    }

    fn add_part(&mut self, dy: MultiIndex, dz: Option<MultiIndex>, coeff: DiffPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry((dy, dz))
            .or_insert_with(|| DiffPoly::zero(&self.fieldset));
        *slot = slot.checked_add(&coeff).expect("same field set");
        if slot.is_zero() {
            // Remove emptied slot to keep the normal form canonical.
            let keys: Vec<_> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in keys {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &DeltaExpr) -> DeltaExpr {
        let mut out = self.clone();
        for ((dy, dz), c) in &other.terms {
            out.add_part(dy.clone(), dz.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> DeltaExpr {
        let mut out = DeltaExpr::zero(&self.fieldset);
        for ((dy, dz), c) in &self.terms {
            out.add_part(dy.clone(), dz.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DeltaExpr) -> DeltaExpr {
        self.add(&other.neg())
    }

    /// Reads a two-point expression as a coefficient table `l -> coeff`.
    /// Errors if any three-point term is present.
    pub fn two_point_table(&self) -> Result<BTreeMap<MultiIndex, DiffPoly>, BracketError> {
        let mut out = BTreeMap::new();
        for ((dy, dz), c) in &self.terms {
            if dz.is_some() {
                return Err(BracketError::Invalid(
                    "three-point term in a two-point context".to_string(),
                ));
            }
            out.insert(dy.clone(), c.clone());
        }
        Ok(out)
    }

    /// The same distribution with the roles of x and y exchanged, renormalized.
    pub fn swap_xy(&self) -> Result<DeltaExpr, BracketError> {
        let mut raw = RawDelta::default();
        for ((dy, dz), c) in &self.terms {
            let mut factors = vec![(Base::Y, Base::X, dy.clone())];
            if let Some(b) = dz {
                factors.push((Base::Y, Base::Z, b.clone()));
            }
            raw.push(c.clone(), Base::Y, factors);
        }
        delta_normalize(&self.fieldset, raw)
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((dy, dz), c)| {
                let mut s = format!("[{}] * d{}(x-y)", c.display(), dy);
                if let Some(b) = dz {
                    s.push_str(&format!(" * d{b}(x-z)"));
                }
                s
            })
            .collect();
        parts.join("  +  ")
    }
}

impl fmt::Display for DeltaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// Rewrites a raw distribution into the unique normal form.
pub fn delta_normalize(fs: &Arc<FieldSet>, raw: RawDelta) -> Result<DeltaExpr, BracketError> {
    let mut out = DeltaExpr::zero(fs);
    let mut work: Vec<RawDeltaTerm> = raw.terms;
    let mut steps = 0usize;
    while let Some(term) = work.pop() {
        steps += 1;
        if steps > 2_000_000 {
            return Err(BracketError::Invalid("delta normalization diverged".into()));
        }
        if term.coeff.is_zero() {
            continue;
        }
        match normalize_step(fs, term)? {
            StepResult::Done { dy, dz, coeff } => out.add_part(dy, dz, coeff),
            StepResult::More(terms) => work.extend(terms),
        }
    }
    Ok(out)
}

enum StepResult {
    Done { dy: MultiIndex, dz: Option<MultiIndex>, coeff: DiffPoly },
    More(Vec<RawDeltaTerm>),
}

fn pair_key(a: Base, b: Base) -> (Base, Base) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn normalize_step(fs: &Arc<FieldSet>, term: RawDeltaTerm) -> Result<StepResult, BracketError> {
    // 1. Orient every factor so the earlier base point comes first.
    let mut sign_flip = false;
    let mut factors: Vec<(Base, Base, MultiIndex)> = Vec::with_capacity(term.factors.len());
    for (a, b, j) in &term.factors {
        if a == b {
            return Err(BracketError::Invalid("delta factor with equal arguments".into()));
        }
        let (lo, hi) = pair_key(*a, *b);
        if (lo, hi) != (*a, *b) && j.total() % 2 == 1 {
            sign_flip = !sign_flip;
        }
        factors.push((lo, hi, j.clone()));
    }
    let coeff = if sign_flip { -term.coeff.clone() } else { term.coeff.clone() };

    // Reject products of deltas on the same pair of points.
    for i in 0..factors.len() {
        for k in i + 1..factors.len() {
            if (factors[i].0, factors[i].1) == (factors[k].0, factors[k].1) {
                return Err(BracketError::Invalid(
                    "product of delta factors on the same point pair".into(),
                ));
            }
        }
    }

    // 2. Rebase the coefficient toward x along an incident factor.
    if term.base != Base::X {
        let b = term.base;
        // Prefer a factor connecting `b` to X, otherwise any factor at `b`.
        let pos = factors
            .iter()
            .position(|(lo, hi, _)| (*lo == Base::X && *hi == b) || (*lo == b && *hi == Base::X))
            .or_else(|| factors.iter().position(|(lo, hi, _)| *lo == b || *hi == b));
        let Some(pos) = pos else {
            return Err(BracketError::Invalid(
                "coefficient based away from x with no delta factor to rebase along".into(),
            ));
        };
        let (lo, hi, j) = factors[pos].clone();
        // Factor is delta^{(j)}(lo - hi) with lo < b or lo == b. The rebase
        // target is the other endpoint.
        let target = if lo == b { hi } else { lo };
        debug_assert!(target < b);
        let mut terms = Vec::new();
        for r in j.sub_indices() {
            let c_binom = Rat::from_integer(j.binomial(&r).into());
            let sign = if (lo == b) && r.total() % 2 == 1 {
                // Derivatives transfer with a parity flip when the coefficient
                // sits at the first argument of the factor.
                -c_binom
            } else {
                c_binom
            };
            let derived = coeff
                .total_derivative_multi(&r)
                .map_err(BracketError::from)?
                .scale(&sign);
            let mut new_factors = factors.clone();
            new_factors[pos] = (lo, hi, j.sub(&r).expect("r <= j"));
            terms.push(RawDeltaTerm { coeff: derived, base: target, factors: new_factors });
        }
        return Ok(StepResult::More(terms));
    }

    // 3. Contract any (y-z) factor against an (x-y) or (x-z) factor.
    if let Some(pos_yz) = factors
        .iter()
        .position(|(lo, hi, _)| *lo == Base::Y && *hi == Base::Z)
    {
        let (_, _, c) = factors[pos_yz].clone();
        if let Some(pos_xy) = factors
            .iter()
            .position(|(lo, hi, _)| *lo == Base::X && *hi == Base::Y)
        {
            // delta^{(a)}(x-y) delta^{(c)}(y-z)
            //   = sum_{r<=a} C(a,r) delta^{(c+r)}(x-z) delta^{(a-r)}(x-y)
            let (_, _, a) = factors[pos_xy].clone();
            let mut terms = Vec::new();
            for r in a.sub_indices() {
                let cb = Rat::from_integer(a.binomial(&r).into());
                let mut new_factors = Vec::new();
                for (i, f) in factors.iter().enumerate() {
                    if i == pos_yz {
                        new_factors.push((Base::X, Base::Z, c.add(&r)));
                    } else if i == pos_xy {
                        new_factors.push((Base::X, Base::Y, a.sub(&r).expect("r <= a")));
                    } else {
                        new_factors.push(f.clone());
                    }
                }
                terms.push(RawDeltaTerm {
                    coeff: coeff.scale(&cb),
                    base: Base::X,
                    factors: new_factors,
                });
            }
            return Ok(StepResult::More(terms));
        }
        if let Some(pos_xz) = factors
            .iter()
            .position(|(lo, hi, _)| *lo == Base::X && *hi == Base::Z)
        {
            // delta^{(b)}(x-z) delta^{(c)}(y-z)
            //   = (-1)^{|c|} sum_{r<=b} C(b,r) delta^{(c+r)}(x-y) delta^{(b-r)}(x-z)
            let (_, _, b) = factors[pos_xz].clone();
            let parity = if c.total() % 2 == 1 { -Rat::from_integer(1.into()) } else { Rat::from_integer(1.into()) };
            let mut terms = Vec::new();
            for r in b.sub_indices() {
                let cb = Rat::from_integer(b.binomial(&r).into()) * parity.clone();
                let mut new_factors = Vec::new();
                for (i, f) in factors.iter().enumerate() {
                    if i == pos_yz {
                        new_factors.push((Base::X, Base::Y, c.add(&r)));
                    } else if i == pos_xz {
                        new_factors.push((Base::X, Base::Z, b.sub(&r).expect("r <= b")));
                    } else {
                        new_factors.push(f.clone());
                    }
                }
                terms.push(RawDeltaTerm {
                    coeff: coeff.scale(&cb),
                    base: Base::X,
                    factors: new_factors,
                });
            }
            return Ok(StepResult::More(terms));
        }
        return Err(BracketError::Invalid(
            "lone (y-z) delta factor cannot be rebased to x".into(),
        ));
    }

    // 4. Emit: at most one (x-y) and one (x-z) factor remain.
    let mut dy: Option<MultiIndex> = None;
    let mut dz: Option<MultiIndex> = None;
    for (lo, hi, j) in &factors {
        match (lo, hi) {
            (Base::X, Base::Y) => dy = Some(j.clone()),
            (Base::X, Base::Z) => dz = Some(j.clone()),
            _ => unreachable!("all other configurations handled above"),
        }
    }
    let Some(dy) = dy else {
        return Err(BracketError::Invalid(
            "normalized term lacks an (x-y) delta factor".into(),
        ));
    };
    Ok(StepResult::Done { dy, dz, coeff })
}
