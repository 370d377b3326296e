use std::fmt;
use std::sync::Arc;

use crate::JetError;

/// Role a field plays in the bracket block structure downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldRole {
    /// Generic field variable.
    Generic,
    /// Phase variable S^alpha.
    Phase,
    /// Density variable (U or the conjugate Q slot).
    Density,
    /// Annihilator density variable N^l.
    Annihilator,
}

impl FieldRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            FieldRole::Generic => "generic",
            FieldRole::Phase => "phase",
            FieldRole::Density => "density",
            FieldRole::Annihilator => "annihilator",
        }
    }
}

/// Ordered declaration of fields over R^d, shared by every object built on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSet {
    dim: usize,
    names: Vec<String>,
    roles: Vec<FieldRole>,
    max_order: usize,
}

/// Default jet truncation order.
pub const DEFAULT_MAX_ORDER: usize = 6;

impl FieldSet {
    /// Builds a field set; names must be unique and `dim >= 1`.
    pub fn new(dim: usize, fields: &[(&str, FieldRole)]) -> Arc<Self> {
        Self::with_max_order(dim, fields, DEFAULT_MAX_ORDER)
    }

    pub fn with_max_order(dim: usize, fields: &[(&str, FieldRole)], max_order: usize) -> Arc<Self> {
        assert!(dim >= 1, "dimension must be at least 1");
        let names: Vec<String> = fields.iter().map(|(n, _)| n.to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            assert!(
                !names[..i].contains(n),
                "duplicate field name `{n}` in field set"
            );
        }
        let roles = fields.iter().map(|(_, r)| *r).collect();
        Arc::new(FieldSet { dim, names, roles, max_order })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn role(&self, idx: usize) -> FieldRole {
        self.roles[idx]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, JetError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| JetError::UnknownField { name: name.to_string() })
    }

    /// Indices of every field with the given role, in declaration order.
    pub fn indices_with_role(&self, role: FieldRole) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.roles[i] == role).collect()
    }

    /// Zero multi-index of this field set's dimension.
    pub fn zero_index(&self) -> MultiIndex {
        MultiIndex::zero(self.dim)
    }

    /// Unit multi-index along `dir` (0-based).
    pub fn unit_index(&self, dir: usize) -> MultiIndex {
        MultiIndex::unit(self.dim, dir)
    }
}

/// A derivative multi-index in N^d.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn new(orders: Vec<u8>) -> Self {
        MultiIndex(orders)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, dir: usize) -> Self {
        let mut v = vec![0; dim];
        v[dir] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self, dir: usize) -> usize {
        self.0[dir] as usize
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn bump(&self, dir: usize) -> Self {
        let mut v = self.0.clone();
        v[dir] += 1;
        MultiIndex(v)
    }

    /// Lowers direction `dir` by one; `None` if already zero there.
    pub fn lower(&self, dir: usize) -> Option<Self> {
        if self.0[dir] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[dir] -= 1;
        Some(MultiIndex(v))
    }

    /// Smallest direction with a positive order.
    pub fn min_positive_dir(&self) -> Option<usize> {
        self.0.iter().position(|&k| k > 0)
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Self) -> Self {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    /// Componentwise difference; `None` unless `other <= self` everywhere.
    pub fn sub(&self, other: &Self) -> Option<Self> {
        let mut v = Vec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(&other.0) {
            if b > a {
                return None;
            }
            v.push(a - b);
        }
        Some(MultiIndex(v))
    }

    /// `other <= self` componentwise.
    pub fn contains(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| b <= a)
    }

    /// Product of per-direction binomial coefficients C(self_p, other_p).
    pub fn binomial(&self, other: &Self) -> u64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| binom(a as u64, b as u64))
            .product()
    }

    /// All multi-indices componentwise between zero and `self`, in lex order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(self.0.len())];
        for (dir, &cap) in self.0.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (cap as usize + 1));
            for base in &out {
                for k in 0..=cap {
                    let mut v = base.0.clone();
                    v[dir] = k;
                    next.push(MultiIndex(v));
                }
            }
            out = next;
        }
        out
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// A field reference plus a derivative multi-index: one coordinate on jet space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JetVar {
    pub field: usize,
    pub deriv: MultiIndex,
}

impl JetVar {
    pub fn new(field: usize, deriv: MultiIndex) -> Self {
        JetVar { field, deriv }
    }

    pub fn base(field: usize, dim: usize) -> Self {
        JetVar { field, deriv: MultiIndex::zero(dim) }
    }

    pub fn order(&self) -> usize {
        self.deriv.total()
    }

    /// Printable name, e.g. `u_x1x1x2` for field `u` with deriv (2,1).
    pub fn display(&self, fs: &FieldSet) -> String {
        let mut s = fs.name(self.field).to_string();
        if !self.deriv.is_zero() {
            s.push('_');
            for dir in 0..self.deriv.dim() {
                for _ in 0..self.deriv.order(dir) {
                    s.push_str(&format!("x{}", dir + 1));
                }
            }
        }
        s
    }
}

impl PartialOrd for JetVar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for JetVar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.field
            .cmp(&other.field)
            .then_with(|| self.deriv.cmp(&other.deriv))
    }
}
