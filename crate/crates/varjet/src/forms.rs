//! Bigraded differential forms: sums of `coefficient × contact generators ×
//! dx factors`, with wedge product, the bidegree projectors, the split
//! `d = d_H + d_V` of the exterior differential, and interior products.
//!
//! Every term is stored in canonical order: the coefficient polynomial
//! first, then contact generators `theta(A, Λ)` sorted by field and
//! multi-index, then `dx` factors with strictly increasing index. The sign
//! rule for reordering homogeneous factors `u`, `v` is
//! `(-1)^{|u||v| + [u][v]}` (form degree times form degree plus parity times
//! parity), so a contact generator of an odd field commutes with itself and
//! may appear with exponent greater than one, while everything else behaves
//! like classical one-forms.

use crate::algebra::{AlgebraError, GradedPolynomial, JetVar};
use crate::multiindex::MultiIndex;
use crate::signature::{FieldRef, Parity, Signature};
use crate::SigRef;
use num_rational::BigRational;
use num_traits::One;
use std::cmp::Ordering;
use std::fmt;

/// A contact generator `theta(A, Λ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThetaGen {
    pub field: FieldRef,
    pub multi: MultiIndex,
}

impl ThetaGen {
    pub fn new(field: FieldRef, multi: MultiIndex) -> Self {
        ThetaGen { field, multi }
    }

    pub fn parity(&self, sig: &Signature) -> Parity {
        sig.parity_of(self.field)
    }

    /// The generator with one more derivative along `lambda`.
    pub fn lift(&self, lambda: usize) -> ThetaGen {
        ThetaGen {
            field: self.field,
            multi: self.multi.add(lambda),
        }
    }
}

impl Ord for ThetaGen {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field, &self.multi).cmp(&(other.field, &other.multi))
    }
}

impl PartialOrd for ThetaGen {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One canonical term of a graded form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormTerm {
    pub coeff: GradedPolynomial,
    contact: Vec<(ThetaGen, u32)>,
    horiz: Vec<usize>,
}

impl FormTerm {
    pub fn contact(&self) -> &[(ThetaGen, u32)] {
        &self.contact
    }

    pub fn horiz(&self) -> &[usize] {
        &self.horiz
    }

    /// Contact degree of the term (sum of generator exponents).
    pub fn contact_degree(&self) -> u32 {
        self.contact.iter().map(|(_, e)| e).sum()
    }

    pub fn horizontal_degree(&self) -> u32 {
        self.horiz.len() as u32
    }

    fn key(&self) -> (&[(ThetaGen, u32)], &[usize]) {
        (&self.contact, &self.horiz)
    }

    /// Grassmann parity of the generator block.
    fn contact_parity(&self, sig: &Signature) -> Parity {
        let odd_units: u32 = self
            .contact
            .iter()
            .filter(|(g, _)| g.parity(sig).is_odd())
            .map(|(_, e)| e)
            .sum();
        Parity::of_count(odd_units as usize)
    }

    fn contact_units(&self) -> Vec<ThetaGen> {
        let mut out = Vec::new();
        for (g, e) in &self.contact {
            for _ in 0..*e {
                out.push(g.clone());
            }
        }
        out
    }

    pub fn jet_order(&self) -> u32 {
        self.coeff.jet_order().max(
            self.contact
                .iter()
                .map(|(g, _)| g.multi.order())
                .max()
                .unwrap_or(0),
        )
    }
}

/// A finite sum of bigraded form terms over a shared signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedForm {
    sig: SigRef,
    terms: Vec<FormTerm>,
}

enum Factor {
    Theta(ThetaGen),
    Dx(usize),
}

impl Factor {
    fn parity(&self, sig: &Signature) -> Parity {
        match self {
            Factor::Theta(g) => g.parity(sig),
            Factor::Dx(_) => Parity::Even,
        }
    }

    fn to_form(&self, sig: &SigRef) -> GradedForm {
        match self {
            Factor::Theta(g) => GradedForm::theta_gen(sig, g.clone()),
            Factor::Dx(l) => GradedForm::dx(sig, *l),
        }
    }
}

impl GradedForm {
    pub fn zero(sig: &SigRef) -> Self {
        GradedForm {
            sig: sig.clone(),
            terms: Vec::new(),
        }
    }

    /// A polynomial viewed as a `(0,0)`-form.
    pub fn from_poly(p: GradedPolynomial) -> Self {
        let sig = p.signature().clone();
        if p.is_zero() {
            return Self::zero(&sig);
        }
        GradedForm {
            sig,
            terms: vec![FormTerm {
                coeff: p,
                contact: Vec::new(),
                horiz: Vec::new(),
            }],
        }
    }

    pub fn dx(sig: &SigRef, lambda: usize) -> Self {
        assert!(lambda < sig.base_dim(), "dx index out of range");
        GradedForm {
            sig: sig.clone(),
            terms: vec![FormTerm {
                coeff: GradedPolynomial::one(sig),
                contact: Vec::new(),
                horiz: vec![lambda],
            }],
        }
    }

    pub fn theta_gen(sig: &SigRef, gen: ThetaGen) -> Self {
        assert!(sig.contains(gen.field), "theta field out of range");
        GradedForm {
            sig: sig.clone(),
            terms: vec![FormTerm {
                coeff: GradedPolynomial::one(sig),
                contact: vec![(gen, 1)],
                horiz: Vec::new(),
            }],
        }
    }

    pub fn theta(sig: &SigRef, field: FieldRef, multi: MultiIndex) -> Self {
        Self::theta_gen(sig, ThetaGen::new(field, multi))
    }

    /// The volume form `dx0 ∧ … ∧ dx{n-1}`.
    pub fn vol(sig: &SigRef) -> Self {
        GradedForm {
            sig: sig.clone(),
            terms: vec![FormTerm {
                coeff: GradedPolynomial::one(sig),
                contact: Vec::new(),
                horiz: (0..sig.base_dim()).collect(),
            }],
        }
    }

    /// `ω_λ = ∂_λ ⌟ vol`.
    pub fn omega(sig: &SigRef, lambda: usize) -> Self {
        Self::vol(sig).contract_coordinate(lambda)
    }

    pub fn signature(&self) -> &SigRef {
        &self.sig
    }

    pub fn terms(&self) -> &[FormTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_sig(&self, other: &GradedForm) -> bool {
        SigRef::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig
    }

    pub fn from_terms(sig: &SigRef, mut terms: Vec<FormTerm>) -> Self {
        terms.sort_by(|a, b| a.key().cmp(&b.key()));
        let mut merged: Vec<FormTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = merged.last_mut() {
                if last.key() == t.key() {
                    last.coeff = last.coeff.try_add(&t.coeff).expect("same signature");
                    continue;
                }
            }
            merged.push(t);
        }
        merged.retain(|t| !t.coeff.is_zero());
        GradedForm {
            sig: sig.clone(),
            terms: merged,
        }
    }

    /// Build a single term `coeff · θ-block · dx-block` given in canonical
    /// generator order already; used by generators and tests.
    pub fn term(
        coeff: GradedPolynomial,
        contact: Vec<(ThetaGen, u32)>,
        horiz: Vec<usize>,
    ) -> GradedForm {
        let sig = coeff.signature().clone();
        let mut acc = Self::from_poly(coeff);
        for (g, e) in contact {
            for _ in 0..e {
                acc = acc.wedge(&Self::theta_gen(&sig, g.clone()));
            }
        }
        for l in horiz {
            acc = acc.wedge(&Self::dx(&sig, l));
        }
        acc
    }

    pub fn try_add(&self, other: &GradedForm) -> Result<GradedForm, AlgebraError> {
        if !self.same_sig(other) {
            return Err(AlgebraError::SignatureMismatch);
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self::from_terms(&self.sig, terms))
    }

    pub fn neg(&self) -> GradedForm {
        GradedForm {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| FormTerm {
                    coeff: t.coeff.neg(),
                    contact: t.contact.clone(),
                    horiz: t.horiz.clone(),
                })
                .collect(),
        }
    }

    pub fn try_sub(&self, other: &GradedForm) -> Result<GradedForm, AlgebraError> {
        self.try_add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> GradedForm {
        let terms = self
            .terms
            .iter()
            .map(|t| FormTerm {
                coeff: t.coeff.scale(c),
                contact: t.contact.clone(),
                horiz: t.horiz.clone(),
            })
            .filter(|t| !t.coeff.is_zero())
            .collect();
        GradedForm {
            sig: self.sig.clone(),
            terms,
        }
    }

    /// Wedge product with the graded sign rule.
    pub fn try_wedge(&self, other: &GradedForm) -> Result<GradedForm, AlgebraError> {
        if !self.same_sig(other) {
            return Err(AlgebraError::SignatureMismatch);
        }
        let mut out: Vec<FormTerm> = Vec::new();
        for t1 in &self.terms {
            for t2 in &other.terms {
                wedge_terms(&self.sig, t1, t2, &mut out);
            }
        }
        Ok(Self::from_terms(&self.sig, out))
    }

    pub fn wedge(&self, other: &GradedForm) -> GradedForm {
        self.try_wedge(other).expect("signature mismatch in wedge")
    }

    /// Wedge a sequence of generator factors onto `lead`, in written order.
    fn wedge_sequence(lead: GradedForm, factors: &[Factor]) -> GradedForm {
        let sig = lead.sig.clone();
        let mut acc = lead;
        for f in factors {
            if acc.is_zero() {
                break;
            }
            acc = acc.wedge(&f.to_form(&sig));
        }
        acc
    }

    /// The `(k, m)`-homogeneous part.
    pub fn project(&self, k: u32, m: u32) -> GradedForm {
        GradedForm {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|t| t.contact_degree() == k && t.horizontal_degree() == m)
                .cloned()
                .collect(),
        }
    }

    /// All bidegrees present, sorted.
    pub fn bidegrees(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self
            .terms
            .iter()
            .map(|t| (t.contact_degree(), t.horizontal_degree()))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Bidegree when homogeneous; `None` for mixed or zero forms.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let ds = self.bidegrees();
        if ds.len() == 1 {
            Some(ds[0])
        } else {
            None
        }
    }

    /// Grassmann parity when homogeneous (`Even` for the zero form), `None`
    /// for mixed parity.
    pub fn parity(&self) -> Option<Parity> {
        let mut p = None;
        for t in &self.terms {
            let cp = t.coeff.parity()?;
            let tp = cp.combine(t.contact_parity(&self.sig));
            match p {
                None => p = Some(tp),
                Some(q) if q == tp => {}
                _ => return None,
            }
        }
        Some(p.unwrap_or(Parity::Even))
    }

    pub fn jet_order(&self) -> u32 {
        self.terms.iter().map(|t| t.jet_order()).max().unwrap_or(0)
    }

    /// Total derivative of the form along `lambda`: acts on coefficients
    /// and lifts each contact generator one derivative.
    pub fn total_derivative(&self, lambda: usize) -> GradedForm {
        let mut acc = Self::zero(&self.sig);
        for t in &self.terms {
            let units = t.contact_units();

            let dc = t.coeff.total_derivative(lambda);
            if !dc.is_zero() {
                let mut factors: Vec<Factor> =
                    units.iter().cloned().map(Factor::Theta).collect();
                factors.extend(t.horiz.iter().map(|&l| Factor::Dx(l)));
                acc = acc
                    .try_add(&Self::wedge_sequence(Self::from_poly(dc), &factors))
                    .unwrap();
            }
            for i in 0..units.len() {
                let mut factors: Vec<Factor> = Vec::with_capacity(units.len() + t.horiz.len());
                for (j, g) in units.iter().enumerate() {
                    factors.push(Factor::Theta(if j == i {
                        g.lift(lambda)
                    } else {
                        g.clone()
                    }));
                }
                factors.extend(t.horiz.iter().map(|&l| Factor::Dx(l)));
                acc = acc
                    .try_add(&Self::wedge_sequence(
                        Self::from_poly(t.coeff.clone()),
                        &factors,
                    ))
                    .unwrap();
            }
        }
        acc
    }

    pub fn total_derivative_multi(&self, multi: &MultiIndex) -> GradedForm {
        let mut acc = self.clone();
        for lambda in multi.indices() {
            acc = acc.total_derivative(lambda);
        }
        acc
    }

    /// Horizontal differential `d_H(φ) = Σ_λ dx^λ ∧ d_λ(φ)`.
    pub fn d_h(&self) -> GradedForm {
        let mut acc = Self::zero(&self.sig);
        for lambda in 0..self.sig.base_dim() {
            let piece = Self::dx(&self.sig, lambda).wedge(&self.total_derivative(lambda));
            acc = acc.try_add(&piece).unwrap();
        }
        acc
    }

    /// Vertical differential `d_V(φ) = Σ θ^A_Λ ∧ ∂^Λ_A(φ)`, the contact
    /// generator wedged from the left.
    pub fn d_v(&self) -> GradedForm {
        let mut acc = Self::zero(&self.sig);
        for t in &self.terms {
            for v in t.coeff.jet_vars() {
                let gen = match &v {
                    JetVar::Jet { field, multi } => ThetaGen::new(*field, multi.clone()),
                    JetVar::Base(_) => unreachable!("jet_vars yields jets only"),
                };
                let dp = t.coeff.partial(&v);
                if dp.is_zero() {
                    continue;
                }
                let mut factors: Vec<Factor> =
                    t.contact_units().into_iter().map(Factor::Theta).collect();
                factors.extend(t.horiz.iter().map(|&l| Factor::Dx(l)));
                let tail = Self::wedge_sequence(Self::from_poly(dp), &factors);
                let piece = Self::theta_gen(&self.sig, gen).wedge(&tail);
                acc = acc.try_add(&piece).unwrap();
            }
        }
        acc
    }

    /// Full exterior differential `d = d_H + d_V`.
    pub fn exterior_d(&self) -> GradedForm {
        self.d_h().try_add(&self.d_v()).unwrap()
    }

    /// Generic interior product with a degree-lowering graded derivation of
    /// parity `deriv_parity` whose pairings with the basis one-forms are
    /// given by the two closures. Follows the antiderivation rule with sign
    /// `(-1)^{|φ| + [φ][ϑ]}` for each skipped homogeneous factor.
    pub(crate) fn contract_with<Fdx, Fth>(
        &self,
        deriv_parity: Parity,
        pair_dx: Fdx,
        pair_theta: Fth,
    ) -> GradedForm
    where
        Fdx: Fn(usize) -> GradedPolynomial,
        Fth: Fn(&ThetaGen) -> GradedPolynomial,
    {
        let sig = &self.sig;
        let mut acc = Self::zero(sig);
        for t in &self.terms {
            let factors: Vec<Factor> = t
                .contact_units()
                .into_iter()
                .map(Factor::Theta)
                .chain(t.horiz.iter().map(|&l| Factor::Dx(l)))
                .collect();
            let (c_even, c_odd) = t.coeff.parity_parts();
            for (cpart, cparity) in [(c_even, Parity::Even), (c_odd, Parity::Odd)] {
                if cpart.is_zero() {
                    continue;
                }
                // skipping the coefficient costs (-1)^{[c][ϑ]}
                let mut prefix: i64 = if cparity.is_odd() && deriv_parity.is_odd() {
                    -1
                } else {
                    1
                };
                for (i, g) in factors.iter().enumerate() {
                    let paired = match g {
                        Factor::Theta(th) => pair_theta(th),
                        Factor::Dx(l) => pair_dx(*l),
                    };
                    if !paired.is_zero() {
                        let lead = Self::from_poly(
                            cpart.scale(&BigRational::from_integer(prefix.into())),
                        );
                        let mut acc_term = lead;
                        for f in &factors[..i] {
                            acc_term = acc_term.wedge(&f.to_form(sig));
                        }
                        acc_term = acc_term.wedge(&Self::from_poly(paired));
                        for f in &factors[i + 1..] {
                            acc_term = acc_term.wedge(&f.to_form(sig));
                        }
                        acc = acc.try_add(&acc_term).unwrap();
                    }
                    // skipping factor g costs (-1)^{1 + [g][ϑ]}
                    if !(g.parity(sig).is_odd() && deriv_parity.is_odd()) {
                        prefix = -prefix;
                    }
                }
            }
        }
        acc
    }

    /// Contraction with the coordinate vector along base index `lambda`:
    /// pairs `dx^μ ↦ δ^μ_λ` and `θ^A_Λ ↦ -s^A_{λ+Λ}`.
    pub fn contract_coordinate(&self, lambda: usize) -> GradedForm {
        let sig = self.sig.clone();
        self.contract_with(
            Parity::Even,
            |l| {
                if l == lambda {
                    GradedPolynomial::one(&sig)
                } else {
                    GradedPolynomial::zero(&sig)
                }
            },
            |g| GradedPolynomial::var(&sig, JetVar::jet(g.field, g.multi.add(lambda))).neg(),
        )
    }

    /// Contraction with the basis vertical vector dual to `ds^A_Λ`: pairs
    /// `θ^B_Σ ↦ δ^B_A δ^Σ_Λ` and `dx ↦ 0`.
    pub fn contract_basis(&self, field: FieldRef, multi: &MultiIndex) -> GradedForm {
        let sig = self.sig.clone();
        let parity = sig.parity_of(field);
        let target = ThetaGen::new(field, multi.clone());
        self.contract_with(
            parity,
            |_| GradedPolynomial::zero(&sig),
            |g| {
                if *g == target {
                    GradedPolynomial::one(&sig)
                } else {
                    GradedPolynomial::zero(&sig)
                }
            },
        )
    }

    /// Coefficient polynomial of a purely horizontal top-degree form; `None`
    /// when contact parts or lower horizontal terms are present. The zero
    /// form yields the zero polynomial.
    pub fn top_coefficient(&self) -> Option<GradedPolynomial> {
        let n = self.sig.base_dim() as u32;
        if self.is_zero() {
            return Some(GradedPolynomial::zero(&self.sig));
        }
        if self.terms.len() == 1 && self.bidegree() == Some((0, n)) {
            Some(self.terms[0].coeff.clone())
        } else {
            None
        }
    }
}

/// Wedge of two canonical terms, pushed onto `out`.
fn wedge_terms(sig: &SigRef, t1: &FormTerm, t2: &FormTerm, out: &mut Vec<FormTerm>) {
    let c1_contact_parity = t1.contact_parity(sig);
    let block_crossings = (t2.contact_degree() as usize) * t1.horiz.len();

    let (c2_even, c2_odd) = t2.coeff.parity_parts();
    for (c2p, c2parity) in [(c2_even, Parity::Even), (c2_odd, Parity::Odd)] {
        if c2p.is_zero() {
            continue;
        }
        let mut sign = 1i64;
        // the coefficient of t2 moves left through the contact block of t1
        if c2parity.is_odd() && c1_contact_parity.is_odd() {
            sign = -sign;
        }
        // the contact block of t2 moves left through the dx block of t1
        if block_crossings % 2 == 1 {
            sign = -sign;
        }
        let contact = match merge_contact(sig, &t1.contact_units(), &t2.contact_units()) {
            Some((units, s)) => {
                sign *= s;
                units
            }
            None => continue,
        };
        let horiz = match merge_horiz(&t1.horiz, &t2.horiz) {
            Some((h, s)) => {
                sign *= s;
                h
            }
            None => continue,
        };
        let mut coeff = t1.coeff.try_mul(&c2p).expect("same signature");
        if sign == -1 {
            coeff = coeff.neg();
        }
        if coeff.is_zero() {
            continue;
        }
        out.push(FormTerm {
            coeff,
            contact,
            horiz,
        });
    }
}

/// Merge two sorted contact unit lists; returns the compressed generator
/// list and the crossing sign, or `None` when an even generator repeats.
fn merge_contact(
    sig: &SigRef,
    left: &[ThetaGen],
    right: &[ThetaGen],
) -> Option<(Vec<(ThetaGen, u32)>, i64)> {
    let mut units: Vec<ThetaGen> = Vec::with_capacity(left.len() + right.len());
    let mut sign = 1i64;
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        match left[i].cmp(&right[j]) {
            Ordering::Less => {
                units.push(left[i].clone());
                i += 1;
            }
            Ordering::Equal => {
                if !left[i].parity(sig).is_odd() {
                    return None;
                }
                units.push(left[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                // right[j] crosses every remaining unit of the left list
                for l in &left[i..] {
                    let both_odd = l.parity(sig).is_odd() && right[j].parity(sig).is_odd();
                    if !both_odd {
                        sign = -sign;
                    }
                }
                units.push(right[j].clone());
                j += 1;
            }
        }
    }
    units.extend_from_slice(&left[i..]);
    units.extend_from_slice(&right[j..]);

    let mut compressed: Vec<(ThetaGen, u32)> = Vec::new();
    for u in units {
        if let Some(last) = compressed.last_mut() {
            if last.0 == u {
                if !u.parity(sig).is_odd() {
                    return None;
                }
                last.1 += 1;
                continue;
            }
        }
        compressed.push((u, 1));
    }
    Some((compressed, sign))
}

/// Merge two strictly increasing dx index lists with the antisymmetric
/// crossing sign; `None` when an index repeats.
fn merge_horiz(left: &[usize], right: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut out = Vec::with_capacity(left.len() + right.len());
    let mut sign = 1i64;
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        match left[i].cmp(&right[j]) {
            Ordering::Less => {
                out.push(left[i]);
                i += 1;
            }
            Ordering::Equal => return None,
            Ordering::Greater => {
                if (left.len() - i) % 2 == 1 {
                    sign = -sign;
                }
                out.push(right[j]);
                j += 1;
            }
        }
    }
    out.extend_from_slice(&left[i..]);
    out.extend_from_slice(&right[j..]);
    Some((out, sign))
}

impl<'a> std::ops::Add for &'a GradedForm {
    type Output = GradedForm;
    fn add(self, rhs: &'a GradedForm) -> GradedForm {
        self.try_add(rhs).expect("signature mismatch in +")
    }
}

impl<'a> std::ops::Sub for &'a GradedForm {
    type Output = GradedForm;
    fn sub(self, rhs: &'a GradedForm) -> GradedForm {
        self.try_sub(rhs).expect("signature mismatch in -")
    }
}

impl fmt::Display for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = self.sig.base_dim();
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let has_gens = !t.contact.is_empty() || !t.horiz.is_empty();
            let coeff_is_one = t.coeff.terms().len() == 1
                && t.coeff.terms()[0].is_constant()
                && t.coeff.terms()[0].coeff.is_one();
            let mut pending_star = false;
            if !has_gens || !coeff_is_one {
                if t.coeff.terms().len() > 1 {
                    write!(f, "({})", t.coeff)?;
                } else {
                    write!(f, "{}", t.coeff)?;
                }
                pending_star = true;
            }
            let mut wrote_gen = false;
            let sep = |f: &mut fmt::Formatter<'_>,
                       pending_star: &mut bool,
                       wrote_gen: &mut bool|
             -> fmt::Result {
                if *pending_star {
                    write!(f, "*")?;
                    *pending_star = false;
                } else if *wrote_gen {
                    write!(f, "^w ")?;
                }
                *wrote_gen = true;
                Ok(())
            };
            for (g, e) in &t.contact {
                for _ in 0..*e {
                    sep(f, &mut pending_star, &mut wrote_gen)?;
                    write!(
                        f,
                        "theta({},[{}])",
                        self.sig.field_name(g.field),
                        g.multi.to_digits()
                    )?;
                }
            }
            if !t.horiz.is_empty() {
                sep(f, &mut pending_star, &mut wrote_gen)?;
                if t.horiz.len() == n {
                    write!(f, "vol")?;
                } else {
                    for (k, l) in t.horiz.iter().enumerate() {
                        if k > 0 {
                            write!(f, "^w ")?;
                        }
                        write!(f, "dx{l}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;
    use std::sync::Arc;

    fn sig_yc() -> SigRef {
        Arc::new(Signature::new(1, &[("y", Parity::Even), ("c", Parity::Odd)]).unwrap())
    }

    fn sig2() -> SigRef {
        Arc::new(Signature::new(2, &[("y", Parity::Even), ("c", Parity::Odd)]).unwrap())
    }

    fn jet(sig: &SigRef, name: &str, idx: &[usize]) -> GradedPolynomial {
        let field = FieldRef::ordinary(sig.field_named(name).unwrap());
        GradedPolynomial::var(
            sig,
            JetVar::jet(field, MultiIndex::from_indices(sig.base_dim(), idx)),
        )
    }

    fn theta(sig: &SigRef, name: &str, idx: &[usize]) -> GradedForm {
        let field = FieldRef::ordinary(sig.field_named(name).unwrap());
        GradedForm::theta(sig, field, MultiIndex::from_indices(sig.base_dim(), idx))
    }

    /// Sign oracle for swapping homogeneous factors.
    fn swap_sign(deg_a: u32, par_a: Parity, deg_b: u32, par_b: Parity) -> i64 {
        let d = (deg_a * deg_b) % 2;
        let p = if par_a.is_odd() && par_b.is_odd() { 1 } else { 0 };
        if (d + p) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn wedge_squares() {
        let sig = sig_yc();
        let ty = theta(&sig, "y", &[]);
        let tc = theta(&sig, "c", &[]);
        // even field: degree sign -1, parity sign +1 -> anticommutes
        assert!(ty.wedge(&ty).is_zero());
        assert_eq!(swap_sign(1, Parity::Even, 1, Parity::Even), -1);
        // odd field: both signs -1 -> commutes, nonzero symmetric square
        let sq = tc.wedge(&tc);
        assert!(!sq.is_zero());
        assert_eq!(swap_sign(1, Parity::Odd, 1, Parity::Odd), 1);
        assert_eq!(sq.terms()[0].contact()[0].1, 2);
        // dx ^ dx = 0
        let dx = GradedForm::dx(&sig, 0);
        assert!(dx.wedge(&dx).is_zero());
    }

    #[test]
    fn wedge_commutation_signs() {
        let sig = sig_yc();
        let dx = GradedForm::dx(&sig, 0);
        let ty = theta(&sig, "y", &[]);
        let tc = theta(&sig, "c", &[]);
        let c = GradedForm::from_poly(jet(&sig, "c", &[]));

        // dx^0 ∧ θ^y = -θ^y ∧ dx^0
        assert_eq!(dx.wedge(&ty), ty.wedge(&dx).neg());
        // odd coefficient commutes with dx but anticommutes with odd theta
        assert_eq!(c.wedge(&dx), dx.wedge(&c));
        assert_eq!(c.wedge(&tc), tc.wedge(&c).neg());
        // and with even theta it commutes
        assert_eq!(c.wedge(&ty), ty.wedge(&c));
    }

    #[test]
    fn wedge_is_associative_spot_check() {
        let sig = sig2();
        let a = theta(&sig, "c", &[0]);
        let b = GradedForm::dx(&sig, 1);
        let c = GradedForm::from_poly(jet(&sig, "c", &[]));
        let ab_c = a.wedge(&b).wedge(&c);
        let a_bc = a.wedge(&b.wedge(&c));
        assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn projections_are_orthogonal_and_complete() {
        let sig = sig_yc();
        let y = jet(&sig, "y", &[]);
        let yx = jet(&sig, "y", &[0]);
        let phi = GradedForm::from_poly(y.clone())
            .wedge(&GradedForm::dx(&sig, 0))
            .try_add(&GradedForm::from_poly(yx.clone()).wedge(&theta(&sig, "y", &[])))
            .unwrap();
        let p01 = phi.project(0, 1);
        let p10 = phi.project(1, 0);
        assert_eq!(p01, GradedForm::from_poly(y).wedge(&GradedForm::dx(&sig, 0)));
        assert_eq!(p10, GradedForm::from_poly(yx).wedge(&theta(&sig, "y", &[])));
        // idempotent, orthogonal, and summing back
        assert_eq!(p01.project(0, 1), p01);
        assert!(p01.project(1, 0).is_zero());
        assert_eq!(p01.try_add(&p10).unwrap(), phi);
    }

    #[test]
    fn d_h_on_scalars_and_generators() {
        let sig = sig_yc();
        let y = jet(&sig, "y", &[]);
        let yx = jet(&sig, "y", &[0]);
        // d_H(y) = y_x dx0
        assert_eq!(
            GradedForm::from_poly(y).d_h(),
            GradedForm::from_poly(yx.clone()).wedge(&GradedForm::dx(&sig, 0))
        );
        // d_H(θ^y) = dx0 ∧ θ^y_x
        assert_eq!(
            theta(&sig, "y", &[]).d_h(),
            GradedForm::dx(&sig, 0).wedge(&theta(&sig, "y", &[0]))
        );
        // top horizontal degree dies
        assert!(GradedForm::from_poly(yx).wedge(&GradedForm::dx(&sig, 0)).d_h().is_zero());
    }

    #[test]
    fn d_v_examples() {
        let sig = sig_yc();
        let yx = jet(&sig, "y", &[0]);
        let half = yx.pow(2).scale(&num_rational::BigRational::new(1.into(), 2.into()));
        // d_V(y_x^2/2) = y_x θ^y_x
        assert_eq!(
            GradedForm::from_poly(half).d_v(),
            GradedForm::from_poly(yx.clone()).wedge(&theta(&sig, "y", &[0]))
        );
        // d_V(y_x dx0) = θ^y_x ∧ dx0
        assert_eq!(
            GradedForm::from_poly(yx).wedge(&GradedForm::dx(&sig, 0)).d_v(),
            theta(&sig, "y", &[0]).wedge(&GradedForm::dx(&sig, 0))
        );
        // base coordinates have no vertical differential
        let x = GradedPolynomial::var(&sig, JetVar::Base(0));
        assert!(GradedForm::from_poly(x).d_v().is_zero());
    }

    #[test]
    fn exterior_d_splits_and_squares_to_zero() {
        let sig = sig_yc();
        let y = jet(&sig, "y", &[]);
        let phi = GradedForm::from_poly(y);
        // d(y) = y_x dx0 + θ^y
        let expect = GradedForm::from_poly(jet(&sig, "y", &[0]))
            .wedge(&GradedForm::dx(&sig, 0))
            .try_add(&theta(&sig, "y", &[]))
            .unwrap();
        assert_eq!(phi.exterior_d(), expect);
        assert!(phi.exterior_d().exterior_d().is_zero());
        // and the mixed Lagrangian case
        let half = jet(&sig, "y", &[0])
            .pow(2)
            .scale(&num_rational::BigRational::new(1.into(), 2.into()));
        let lag = GradedForm::from_poly(half).wedge(&GradedForm::dx(&sig, 0));
        let d = lag.exterior_d();
        let expect = GradedForm::from_poly(jet(&sig, "y", &[0]))
            .wedge(&theta(&sig, "y", &[0]))
            .wedge(&GradedForm::dx(&sig, 0));
        assert_eq!(d, expect);
    }

    #[test]
    fn contract_coordinate_examples() {
        let sig = sig_yc();
        // ∂_x ⌟ dx0 = 1
        assert_eq!(
            GradedForm::dx(&sig, 0).contract_coordinate(0),
            GradedForm::from_poly(GradedPolynomial::one(&sig))
        );
        // ∂_x ⌟ θ^y = -y_x
        assert_eq!(
            theta(&sig, "y", &[]).contract_coordinate(0),
            GradedForm::from_poly(jet(&sig, "y", &[0]).neg())
        );
    }

    #[test]
    fn contract_basis_pairs_duals() {
        let sig = sig_yc();
        let one = GradedForm::from_poly(GradedPolynomial::one(&sig));
        let fy = FieldRef::ordinary(0);
        let e = MultiIndex::empty(1);
        assert_eq!(theta(&sig, "y", &[]).contract_basis(fy, &e), one);
        assert!(theta(&sig, "y", &[0]).contract_basis(fy, &e).is_zero());
        assert!(GradedForm::dx(&sig, 0).contract_basis(fy, &e).is_zero());
    }

    #[test]
    fn omega_signs() {
        let sig = sig2();
        // ω_0 = dx1, ω_1 = -dx0
        assert_eq!(GradedForm::omega(&sig, 0), GradedForm::dx(&sig, 1));
        assert_eq!(GradedForm::omega(&sig, 1), GradedForm::dx(&sig, 0).neg());
        // dx^λ ∧ ω_μ = δ^λ_μ vol
        for l in 0..2 {
            for m in 0..2 {
                let w = GradedForm::dx(&sig, l).wedge(&GradedForm::omega(&sig, m));
                if l == m {
                    assert_eq!(w, GradedForm::vol(&sig));
                } else {
                    assert!(w.is_zero());
                }
            }
        }
    }

    #[test]
    fn bicomplex_identities_on_samples() {
        let sig = sig2();
        let samples = [
            GradedForm::from_poly(&jet(&sig, "y", &[0]) * &jet(&sig, "c", &[])),
            theta(&sig, "c", &[1]).wedge(&GradedForm::from_poly(jet(&sig, "y", &[]))),
            theta(&sig, "y", &[])
                .wedge(&GradedForm::dx(&sig, 1))
                .wedge(&GradedForm::from_poly(jet(&sig, "c", &[0]))),
        ];
        for phi in &samples {
            assert!(phi.d_h().d_h().is_zero(), "d_H^2 on {phi}");
            assert!(phi.d_v().d_v().is_zero(), "d_V^2 on {phi}");
            let anti = phi.d_h().d_v().try_add(&phi.d_v().d_h()).unwrap();
            assert!(anti.is_zero(), "d_H d_V + d_V d_H on {phi}");
            assert!(phi.exterior_d().exterior_d().is_zero(), "d^2 on {phi}");
        }
    }

    #[test]
    fn interior_antiderivation_rule() {
        // ϑ⌟(φ∧σ) = (ϑ⌟φ)∧σ + (-1)^{|φ|+[φ][ϑ]} φ∧(ϑ⌟σ), checked for the
        // even coordinate contraction on homogeneous sample pairs.
        let sig = sig2();
        let pairs = [
            (
                theta(&sig, "c", &[]).wedge(&GradedForm::dx(&sig, 0)),
                GradedForm::from_poly(jet(&sig, "y", &[1])).wedge(&GradedForm::dx(&sig, 1)),
            ),
            (
                GradedForm::from_poly(jet(&sig, "c", &[0])).wedge(&GradedForm::dx(&sig, 1)),
                theta(&sig, "y", &[0]),
            ),
        ];
        for (phi, sigma) in pairs {
            let (k, m) = phi.bidegree().unwrap();
            // [ϑ] even, so the sign is (-1)^{|φ|}
            let sign = if (k + m) % 2 == 0 { 1i64 } else { -1 };
            let lhs = phi.wedge(&sigma).contract_coordinate(0);
            let second = phi
                .wedge(&sigma.contract_coordinate(0))
                .scale(&BigRational::from_integer(sign.into()));
            let rhs = phi.contract_coordinate(0).wedge(&sigma).try_add(&second).unwrap();
            assert_eq!(lhs, rhs, "rule fails for {phi} , {sigma}");
        }
    }

    #[test]
    fn display_canonical() {
        let sig = sig_yc();
        let yxx = jet(&sig, "y", &[0, 0]);
        let phi = GradedForm::from_poly(yxx.neg())
            .wedge(&theta(&sig, "y", &[]))
            .wedge(&GradedForm::vol(&sig));
        assert_eq!(phi.to_string(), "-1*y[00]*theta(y,[])^w vol");
        assert_eq!(GradedForm::zero(&sig).to_string(), "0");
        let two_d = sig2();
        let psi = GradedForm::from_poly(jet(&two_d, "y", &[])).wedge(&GradedForm::dx(&two_d, 1));
        assert_eq!(psi.to_string(), "y*dx1");
    }
}
