//! The computational chart: base dimension, field roster with Grassmann
//! parities, and whether auxiliary mirror variables are available.
//!
//! A [`Signature`] is immutable after construction and shared (via
//! `Arc`) between every value built over it.

use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Grassmann parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Z2 addition of parities.
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        self.combine(Parity::Odd)
    }

    /// Parity of `k` odd factors.
    pub fn of_count(k: usize) -> Parity {
        if k % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// Reference to a field of the roster: an ordinary field or its auxiliary
/// mirror. Mirrors carry the same parity as the field they mirror and sort
/// after all ordinary fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldRef {
    pub index: usize,
    pub aux: bool,
}

impl FieldRef {
    pub fn ordinary(index: usize) -> Self {
        FieldRef { index, aux: false }
    }

    pub fn mirror(index: usize) -> Self {
        FieldRef { index, aux: true }
    }
}

impl Ord for FieldRef {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.aux, self.index).cmp(&(other.aux, other.index))
    }
}

impl PartialOrd for FieldRef {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// One declared field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldDecl {
    pub name: String,
    pub parity: Parity,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("base dimension must be at least 1")]
    ZeroDimension,
    #[error("field roster must not be empty")]
    EmptyRoster,
    #[error("duplicate field name `{0}`")]
    DuplicateField(String),
    #[error("`{0}` is not a valid field name")]
    BadFieldName(String),
}

/// The chart declaration shared by every value of the engine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Signature {
    base_dim: usize,
    fields: Vec<FieldDecl>,
    aux_enabled: bool,
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Names that would collide with DSL builtins.
fn is_reserved(name: &str) -> bool {
    matches!(
        name,
        "dim" | "field" | "aux" | "even" | "odd" | "vol" | "theta" | "d" | "d_H" | "delta"
            | "deriv"
    ) || {
        // x<i>, dx<i>, d<i> forms
        let digits_after = |p: &str| {
            name.strip_prefix(p)
                .map(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
                .unwrap_or(false)
        };
        digits_after("x") || digits_after("dx") || digits_after("d")
    }
}

impl Signature {
    pub fn new<S: AsRef<str>>(
        base_dim: usize,
        fields: &[(S, Parity)],
    ) -> Result<Signature, SignatureError> {
        if base_dim == 0 {
            return Err(SignatureError::ZeroDimension);
        }
        if fields.is_empty() {
            return Err(SignatureError::EmptyRoster);
        }
        let mut decls = Vec::with_capacity(fields.len());
        for (name, parity) in fields {
            let name = name.as_ref();
            if !is_identifier(name) || is_reserved(name) {
                return Err(SignatureError::BadFieldName(name.to_string()));
            }
            if decls.iter().any(|d: &FieldDecl| d.name == name) {
                return Err(SignatureError::DuplicateField(name.to_string()));
            }
            decls.push(FieldDecl {
                name: name.to_string(),
                parity: *parity,
            });
        }
        Ok(Signature {
            base_dim,
            fields: decls,
            aux_enabled: false,
        })
    }

    /// The same roster with auxiliary mirror variables enabled.
    pub fn with_aux(&self) -> Signature {
        Signature {
            aux_enabled: true,
            ..self.clone()
        }
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn aux_enabled(&self) -> bool {
        self.aux_enabled
    }

    pub fn fields(&self) -> &[FieldDecl] {
        &self.fields
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    pub fn field_named(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|d| d.name == name)
    }

    /// Parity of a field or of its mirror (mirrors inherit the parity).
    pub fn parity_of(&self, field: FieldRef) -> Parity {
        self.fields[field.index].parity
    }

    /// Display name of a field reference; mirrors carry a `~` suffix.
    pub fn field_name(&self, field: FieldRef) -> String {
        let base = &self.fields[field.index].name;
        if field.aux {
            format!("{base}~")
        } else {
            base.clone()
        }
    }

    /// Every field slot of the algebra, ordinary fields first, mirrors (when
    /// enabled) after them, in canonical order.
    pub fn field_refs(&self) -> Vec<FieldRef> {
        let mut out: Vec<FieldRef> = (0..self.fields.len()).map(FieldRef::ordinary).collect();
        if self.aux_enabled {
            out.extend((0..self.fields.len()).map(FieldRef::mirror));
        }
        out
    }

    pub fn contains(&self, field: FieldRef) -> bool {
        field.index < self.fields.len() && (!field.aux || self.aux_enabled)
    }
}
