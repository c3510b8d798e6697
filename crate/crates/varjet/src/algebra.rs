//! The graded commutative coefficient ring: exact-rational polynomials in
//! the base coordinates and even jet variables, times Grassmann monomials in
//! the odd jets.
//!
//! Polynomials are kept in a canonical form (sorted monomials with distinct
//! variable parts, no zero coefficients), so equality is structural
//! comparison. Odd variables anticommute and square to zero; partial
//! derivatives with respect to odd variables act from the left.

use crate::multiindex::MultiIndex;
use crate::signature::{FieldRef, Parity, Signature};
use crate::SigRef;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("operands belong to different signatures")]
    SignatureMismatch,
    #[error("no scaling weight supplied for field degree {0}")]
    MissingWeight(u32),
    #[error("variable does not belong to the signature")]
    UnknownVariable,
}

/// A single chart variable: a base coordinate `x^mu` or a jet `s^A_Λ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum JetVar {
    Base(usize),
    Jet { field: FieldRef, multi: MultiIndex },
}

impl JetVar {
    pub fn jet(field: FieldRef, multi: MultiIndex) -> Self {
        JetVar::Jet { field, multi }
    }

    pub fn parity(&self, sig: &Signature) -> Parity {
        match self {
            JetVar::Base(_) => Parity::Even,
            JetVar::Jet { field, .. } => sig.parity_of(*field),
        }
    }

    pub fn jet_order(&self) -> u32 {
        match self {
            JetVar::Base(_) => 0,
            JetVar::Jet { multi, .. } => multi.order(),
        }
    }

    /// The jet with one more derivative along `lambda`; base coordinates
    /// have no lift.
    pub fn lift(&self, lambda: usize) -> Option<JetVar> {
        match self {
            JetVar::Base(_) => None,
            JetVar::Jet { field, multi } => Some(JetVar::Jet {
                field: *field,
                multi: multi.add(lambda),
            }),
        }
    }
}

impl Ord for JetVar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (JetVar::Base(a), JetVar::Base(b)) => a.cmp(b),
            (JetVar::Base(_), JetVar::Jet { .. }) => Ordering::Less,
            (JetVar::Jet { .. }, JetVar::Base(_)) => Ordering::Greater,
            (
                JetVar::Jet { field: fa, multi: ma },
                JetVar::Jet { field: fb, multi: mb },
            ) => (fa, ma).cmp(&(fb, mb)),
        }
    }
}

impl PartialOrd for JetVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficient times a product of even variable powers and a strictly
/// ordered list of odd variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMonomial {
    pub coeff: BigRational,
    evens: Vec<(JetVar, u32)>,
    odds: Vec<JetVar>,
}

impl GradedMonomial {
    pub fn constant(coeff: BigRational) -> Self {
        GradedMonomial {
            coeff,
            evens: Vec::new(),
            odds: Vec::new(),
        }
    }

    pub fn evens(&self) -> &[(JetVar, u32)] {
        &self.evens
    }

    pub fn odds(&self) -> &[JetVar] {
        &self.odds
    }

    fn key(&self) -> (&[(JetVar, u32)], &[JetVar]) {
        (&self.evens, &self.odds)
    }

    pub fn parity(&self) -> Parity {
        Parity::of_count(self.odds.len())
    }

    /// Total degree in jet variables, base coordinates excluded.
    pub fn field_degree(&self) -> u32 {
        let even_part: u32 = self
            .evens
            .iter()
            .filter(|(v, _)| matches!(v, JetVar::Jet { .. }))
            .map(|(_, e)| *e)
            .sum();
        even_part + self.odds.len() as u32
    }

    pub fn jet_order(&self) -> u32 {
        self.evens
            .iter()
            .map(|(v, _)| v.jet_order())
            .chain(self.odds.iter().map(|v| v.jet_order()))
            .max()
            .unwrap_or(0)
    }

    pub fn variables(&self) -> impl Iterator<Item = &JetVar> {
        self.evens.iter().map(|(v, _)| v).chain(self.odds.iter())
    }

    pub fn is_constant(&self) -> bool {
        self.evens.is_empty() && self.odds.is_empty()
    }
}

/// Exact-rational graded polynomial in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPolynomial {
    sig: SigRef,
    terms: Vec<GradedMonomial>,
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl GradedPolynomial {
    pub fn zero(sig: &SigRef) -> Self {
        GradedPolynomial {
            sig: sig.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(sig: &SigRef, c: BigRational) -> Self {
        Self::from_monomials(sig, vec![GradedMonomial::constant(c)])
    }

    pub fn from_int(sig: &SigRef, n: i64) -> Self {
        Self::constant(sig, rational(n, 1))
    }

    pub fn one(sig: &SigRef) -> Self {
        Self::from_int(sig, 1)
    }

    /// The polynomial consisting of the single variable `v`.
    pub fn var(sig: &SigRef, v: JetVar) -> Self {
        let mono = match v.parity(sig) {
            Parity::Even => GradedMonomial {
                coeff: BigRational::one(),
                evens: vec![(v, 1)],
                odds: Vec::new(),
            },
            Parity::Odd => GradedMonomial {
                coeff: BigRational::one(),
                evens: Vec::new(),
                odds: vec![v],
            },
        };
        GradedPolynomial {
            sig: sig.clone(),
            terms: vec![mono],
        }
    }

    /// Normalize a list of monomials: sort by variable part, merge equal
    /// keys, drop zero coefficients.
    pub fn from_monomials(sig: &SigRef, mut monos: Vec<GradedMonomial>) -> Self {
        monos.sort_by(|a, b| a.key().cmp(&b.key()));
        let mut terms: Vec<GradedMonomial> = Vec::with_capacity(monos.len());
        for m in monos {
            if let Some(last) = terms.last_mut() {
                if last.key() == m.key() {
                    last.coeff += m.coeff;
                    continue;
                }
            }
            terms.push(m);
        }
        terms.retain(|m| !m.coeff.is_zero());
        GradedPolynomial {
            sig: sig.clone(),
            terms,
        }
    }

    pub fn signature(&self) -> &SigRef {
        &self.sig
    }

    pub fn terms(&self) -> &[GradedMonomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_sig(&self, other: &GradedPolynomial) -> bool {
        SigRef::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig
    }

    pub fn try_add(&self, other: &GradedPolynomial) -> Result<GradedPolynomial, AlgebraError> {
        if !self.same_sig(other) {
            return Err(AlgebraError::SignatureMismatch);
        }
        let mut monos = self.terms.clone();
        monos.extend(other.terms.iter().cloned());
        Ok(Self::from_monomials(&self.sig, monos))
    }

    pub fn neg(&self) -> GradedPolynomial {
        let terms = self
            .terms
            .iter()
            .map(|m| GradedMonomial {
                coeff: -m.coeff.clone(),
                evens: m.evens.clone(),
                odds: m.odds.clone(),
            })
            .collect();
        GradedPolynomial {
            sig: self.sig.clone(),
            terms,
        }
    }

    pub fn try_sub(&self, other: &GradedPolynomial) -> Result<GradedPolynomial, AlgebraError> {
        self.try_add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> GradedPolynomial {
        if c.is_zero() {
            return Self::zero(&self.sig);
        }
        let terms = self
            .terms
            .iter()
            .map(|m| GradedMonomial {
                coeff: &m.coeff * c,
                evens: m.evens.clone(),
                odds: m.odds.clone(),
            })
            .collect();
        GradedPolynomial {
            sig: self.sig.clone(),
            terms,
        }
    }

    /// Graded-commutative product. Reordering odd factors into canonical
    /// order contributes the permutation sign; a repeated odd factor kills
    /// the term.
    pub fn try_mul(&self, other: &GradedPolynomial) -> Result<GradedPolynomial, AlgebraError> {
        if !self.same_sig(other) {
            return Err(AlgebraError::SignatureMismatch);
        }
        let mut monos = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                if let Some(m) = mul_monomials(a, b) {
                    monos.push(m);
                }
            }
        }
        Ok(Self::from_monomials(&self.sig, monos))
    }

    pub fn pow(&self, e: u32) -> GradedPolynomial {
        let mut acc = Self::one(&self.sig);
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same signature");
        }
        acc
    }

    /// Left partial derivative with respect to `v`. Derivative of an absent
    /// variable is zero.
    pub fn partial(&self, v: &JetVar) -> GradedPolynomial {
        let odd = v.parity(&self.sig).is_odd();
        let mut monos = Vec::new();
        for m in &self.terms {
            if odd {
                if let Some(pos) = m.odds.iter().position(|w| w == v) {
                    let mut odds = m.odds.clone();
                    odds.remove(pos);
                    let sign = if pos % 2 == 0 { 1 } else { -1 };
                    monos.push(GradedMonomial {
                        coeff: &m.coeff * rational(sign, 1),
                        evens: m.evens.clone(),
                        odds,
                    });
                }
            } else if let Some(pos) = m.evens.iter().position(|(w, _)| w == v) {
                let (_, e) = m.evens[pos];
                let mut evens = m.evens.clone();
                if e == 1 {
                    evens.remove(pos);
                } else {
                    evens[pos].1 = e - 1;
                }
                monos.push(GradedMonomial {
                    coeff: &m.coeff * rational(e as i64, 1),
                    evens,
                    odds: m.odds.clone(),
                });
            }
        }
        Self::from_monomials(&self.sig, monos)
    }

    /// All jet variables occurring in the polynomial (base coordinates
    /// excluded).
    pub fn jet_vars(&self) -> BTreeSet<JetVar> {
        let mut out = BTreeSet::new();
        for m in &self.terms {
            for v in m.variables() {
                if matches!(v, JetVar::Jet { .. }) {
                    out.insert(v.clone());
                }
            }
        }
        out
    }

    /// Total derivative `d_λ = ∂_λ + Σ s^A_{λ+Λ} ∂^Λ_A`.
    pub fn total_derivative(&self, lambda: usize) -> GradedPolynomial {
        let mut acc = self.partial(&JetVar::Base(lambda));
        for v in self.jet_vars() {
            let lifted = Self::var(&self.sig, v.lift(lambda).expect("jet variable"));
            let part = lifted.try_mul(&self.partial(&v)).expect("same signature");
            acc = acc.try_add(&part).expect("same signature");
        }
        acc
    }

    /// `d_Λ`: the composition of total derivatives prescribed by the counts
    /// of `multi` (they commute, so the order is immaterial).
    pub fn total_derivative_multi(&self, multi: &MultiIndex) -> GradedPolynomial {
        let mut acc = self.clone();
        for lambda in multi.indices() {
            acc = acc.total_derivative(lambda);
        }
        acc
    }

    /// Scale every monomial by `weight(k)` where `k` is its field degree.
    pub fn euler_scale<F>(&self, weight: F) -> Result<GradedPolynomial, AlgebraError>
    where
        F: Fn(u32) -> Option<BigRational>,
    {
        let mut monos = Vec::with_capacity(self.terms.len());
        for m in &self.terms {
            let k = m.field_degree();
            let w = weight(k).ok_or(AlgebraError::MissingWeight(k))?;
            if w.is_zero() {
                continue;
            }
            monos.push(GradedMonomial {
                coeff: &m.coeff * &w,
                evens: m.evens.clone(),
                odds: m.odds.clone(),
            });
        }
        Ok(Self::from_monomials(&self.sig, monos))
    }

    /// Split into homogeneous field-degree components.
    pub fn field_degree_parts(&self) -> Vec<(u32, GradedPolynomial)> {
        let mut parts: Vec<(u32, Vec<GradedMonomial>)> = Vec::new();
        for m in &self.terms {
            let k = m.field_degree();
            match parts.iter_mut().find(|(d, _)| *d == k) {
                Some((_, v)) => v.push(m.clone()),
                None => parts.push((k, vec![m.clone()])),
            }
        }
        parts.sort_by_key(|(d, _)| *d);
        parts
            .into_iter()
            .map(|(d, monos)| (d, Self::from_monomials(&self.sig, monos)))
            .collect()
    }

    /// The parity-homogeneous components `(even part, odd part)`.
    pub fn parity_parts(&self) -> (GradedPolynomial, GradedPolynomial) {
        let (even, odd): (Vec<_>, Vec<_>) = self
            .terms
            .iter()
            .cloned()
            .partition(|m| m.parity() == Parity::Even);
        (
            GradedPolynomial {
                sig: self.sig.clone(),
                terms: even,
            },
            GradedPolynomial {
                sig: self.sig.clone(),
                terms: odd,
            },
        )
    }

    /// Parity when homogeneous; `None` for mixed-parity polynomials. The
    /// zero polynomial counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut p = None;
        for m in &self.terms {
            match p {
                None => p = Some(m.parity()),
                Some(q) if q == m.parity() => {}
                _ => return None,
            }
        }
        Some(p.unwrap_or(Parity::Even))
    }

    pub fn jet_order(&self) -> u32 {
        self.terms.iter().map(|m| m.jet_order()).max().unwrap_or(0)
    }

    /// Maximum over monomials of the total variable degree (counting base
    /// coordinates too); used by size guards and generators.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|m| {
                let e: u32 = m.evens.iter().map(|(_, k)| *k).sum();
                e + m.odds.len() as u32
            })
            .max()
            .unwrap_or(0)
    }
}

/// Product of two canonical monomials; `None` when an odd variable repeats.
fn mul_monomials(a: &GradedMonomial, b: &GradedMonomial) -> Option<GradedMonomial> {
    // merge even powers
    let mut evens = Vec::with_capacity(a.evens.len() + b.evens.len());
    let (mut i, mut j) = (0, 0);
    while i < a.evens.len() && j < b.evens.len() {
        match a.evens[i].0.cmp(&b.evens[j].0) {
            Ordering::Less => {
                evens.push(a.evens[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                evens.push(b.evens[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                evens.push((a.evens[i].0.clone(), a.evens[i].1 + b.evens[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    evens.extend_from_slice(&a.evens[i..]);
    evens.extend_from_slice(&b.evens[j..]);

    // merge odd factors counting the crossings of the interleave
    let mut odds = Vec::with_capacity(a.odds.len() + b.odds.len());
    let mut crossings = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.odds.len() && j < b.odds.len() {
        match a.odds[i].cmp(&b.odds[j]) {
            Ordering::Less => {
                odds.push(a.odds[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                // b.odds[j] moves left past the remaining factors of a
                crossings += a.odds.len() - i;
                odds.push(b.odds[j].clone());
                j += 1;
            }
            Ordering::Equal => return None,
        }
    }
    odds.extend_from_slice(&a.odds[i..]);
    odds.extend_from_slice(&b.odds[j..]);

    let mut coeff = &a.coeff * &b.coeff;
    if crossings % 2 == 1 {
        coeff = -coeff;
    }
    Some(GradedMonomial {
        coeff,
        evens,
        odds,
    })
}

impl<'a> std::ops::Add for &'a GradedPolynomial {
    type Output = GradedPolynomial;
    fn add(self, rhs: &'a GradedPolynomial) -> GradedPolynomial {
        self.try_add(rhs).expect("signature mismatch in +")
    }
}

impl<'a> std::ops::Sub for &'a GradedPolynomial {
    type Output = GradedPolynomial;
    fn sub(self, rhs: &'a GradedPolynomial) -> GradedPolynomial {
        self.try_sub(rhs).expect("signature mismatch in -")
    }
}

impl<'a> std::ops::Mul for &'a GradedPolynomial {
    type Output = GradedPolynomial;
    fn mul(self, rhs: &'a GradedPolynomial) -> GradedPolynomial {
        self.try_mul(rhs).expect("signature mismatch in *")
    }
}

fn write_var(f: &mut fmt::Formatter<'_>, sig: &Signature, v: &JetVar) -> fmt::Result {
    match v {
        JetVar::Base(mu) => write!(f, "x{mu}"),
        JetVar::Jet { field, multi } => {
            if multi.is_empty() {
                write!(f, "{}", sig.field_name(*field))
            } else {
                write!(f, "{}[{}]", sig.field_name(*field), multi.to_digits())
            }
        }
    }
}

pub(crate) fn write_monomial(
    f: &mut fmt::Formatter<'_>,
    sig: &Signature,
    m: &GradedMonomial,
) -> fmt::Result {
    if m.is_constant() {
        return write!(f, "{}", m.coeff);
    }
    if !m.coeff.is_one() {
        write!(f, "{}*", m.coeff)?;
    }
    let mut first = true;
    for (v, e) in &m.evens {
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write_var(f, sig, v)?;
        if *e > 1 {
            write!(f, "^{e}")?;
        }
    }
    for v in &m.odds {
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write_var(f, sig, v)?;
    }
    Ok(())
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write_monomial(f, &self.sig, m)?;
        }
        Ok(())
    }
}
