//! Elementary multi-turns and their supports, the safe multi-turn family,
//! application to monomials, and certified ideal membership.
//!
//! A support is a set of incident monomials built from a vanishing Laurent
//! polynomial wrapped in a frame (a partial-arc word on each side).  Every
//! support the engine builds carries a certificate: an explicit list of
//! (L, R) word pairs with Σ L·(1+v+vw)·R equal to the support's monomial sum
//! in Z₂F.  Certificates are synthesized by a small logging rewriting system
//! over the generator,
//!
//!   v⁻¹ → 1 + w        vw → 1 + v        wv → vw        vw⁻¹ → v + w⁻¹
//!
//! whose normal forms v^a (a ≥ 0) and w^b have independent commutative
//! shadows, so a Laurent polynomial rewrites to zero exactly when it
//! vanishes at ((1+w)⁻¹, w).  `check_certificate` re-expands a certificate
//! with plain free-group arithmetic and is the project's independent oracle.

use crate::construction::Params;
use crate::freegroup::Word;
use crate::gfp::{ArcKind, GfpPath, PathPoint};
use crate::ratfun::{LaurentMonomial, LaurentPoly2, Var};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MultiTurnError {
    #[error("polynomial does not vanish at ((1+w)⁻¹, w)")]
    NotVanishing,
    #[error("frame side is not a genuine arc fragment")]
    BadFrame,
    #[error("the monomial is not part of the support")]
    NotInSupport,
    #[error("no derivation recorded")]
    NoDerivation,
}

/// A list of (L, R) pairs witnessing Σ L·(1+v+vw)·R = some element of I.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Certificate {
    pub pairs: Vec<(Word, Word)>,
}

impl Certificate {
    pub fn empty() -> Self {
        Certificate::default()
    }

    pub fn concat(mut self, other: Certificate) -> Certificate {
        self.pairs.extend(other.pairs);
        self
    }

    /// Expands Σ L·(1+v+vw)·R with full free reduction and mod-2 collection.
    pub fn expand(&self, p: &Params) -> BTreeSet<Word> {
        let v = p.v_word();
        let vw = v.multiply(&p.w);
        let mut acc: BTreeSet<Word> = BTreeSet::new();
        let mut toggle = |w: Word| {
            if !acc.remove(&w) {
                acc.insert(w);
            }
        };
        for (l, r) in &self.pairs {
            toggle(l.multiply(r));
            toggle(l.multiply(v).multiply(r));
            toggle(l.multiply(&vw).multiply(r));
        }
        acc
    }

    pub fn to_json(&self, p: &Params) -> serde_json::Value {
        serde_json::Value::Array(
            self.pairs
                .iter()
                .map(|(l, r)| {
                    serde_json::json!([l.format(&p.alphabet), r.format(&p.alphabet)])
                })
                .collect(),
        )
    }

    pub fn from_json(value: &serde_json::Value, p: &Params) -> Option<Certificate> {
        let arr = value.as_array()?;
        let mut pairs = Vec::with_capacity(arr.len());
        for pair in arr {
            let pair = pair.as_array()?;
            if pair.len() != 2 {
                return None;
            }
            let l = Word::parse(pair[0].as_str()?, &p.alphabet).ok()?;
            let r = Word::parse(pair[1].as_str()?, &p.alphabet).ok()?;
            pairs.push((l, r));
        }
        Some(Certificate { pairs })
    }
}

/// The brute-force ground-truth oracle: does the certificate expand to
/// exactly the given mod-2 set of monomials?
pub fn check_certificate(monomials: &BTreeSet<Word>, cert: &Certificate, p: &Params) -> bool {
    cert.expand(p) == *monomials
}

/// Which arc a frame side is a fragment of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameSide {
    Empty,
    V,
    VInv,
    W,
    WInv,
}

/// The fragment pair wrapped around a vanishing polynomial.  `left` is a
/// genuine final fragment (suffix) of v^{±1} or w^{±1}, `right` a genuine
/// initial fragment (prefix); either may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub left: Word,
    pub right: Word,
    pub left_kind: FrameSide,
    pub right_kind: FrameSide,
}

fn is_suffix(of: &Word, frag: &Word) -> bool {
    frag.len() <= of.len()
        && of.letters()[of.len() - frag.len()..] == *frag.letters()
}

fn is_prefix(of: &Word, frag: &Word) -> bool {
    frag.len() <= of.len() && of.letters()[..frag.len()] == *frag.letters()
}

impl Frame {
    pub fn trivial() -> Self {
        Frame {
            left: Word::identity(),
            right: Word::identity(),
            left_kind: FrameSide::Empty,
            right_kind: FrameSide::Empty,
        }
    }

    pub fn new(left: Word, right: Word, p: &Params) -> Result<Frame, MultiTurnError> {
        let classify_left = |w: &Word| -> Option<FrameSide> {
            if w.is_empty() {
                return Some(FrameSide::Empty);
            }
            if w.len() < p.v().len() && is_suffix(p.v_word(), w) {
                return Some(FrameSide::V);
            }
            if w.len() < p.v().len() && is_suffix(&p.v_word().invert(), w) {
                return Some(FrameSide::VInv);
            }
            if w.len() < p.w.len() && is_suffix(&p.w, w) {
                return Some(FrameSide::W);
            }
            if w.len() < p.w.len() && is_suffix(&p.w.invert(), w) {
                return Some(FrameSide::WInv);
            }
            None
        };
        let classify_right = |w: &Word| -> Option<FrameSide> {
            if w.is_empty() {
                return Some(FrameSide::Empty);
            }
            if w.len() < p.v().len() && is_prefix(p.v_word(), w) {
                return Some(FrameSide::V);
            }
            if w.len() < p.v().len() && is_prefix(&p.v_word().invert(), w) {
                return Some(FrameSide::VInv);
            }
            if w.len() < p.w.len() && is_prefix(&p.w, w) {
                return Some(FrameSide::W);
            }
            if w.len() < p.w.len() && is_prefix(&p.w.invert(), w) {
                return Some(FrameSide::WInv);
            }
            None
        };
        let left_kind = classify_left(&left).ok_or(MultiTurnError::BadFrame)?;
        let right_kind = classify_right(&right).ok_or(MultiTurnError::BadFrame)?;
        Ok(Frame { left, right, left_kind, right_kind })
    }

    /// The initial point shared by every monomial of a support in this frame.
    pub fn initial_point(&self, p: &Params) -> PathPoint {
        match self.left_kind {
            FrameSide::Empty => PathPoint::origin(),
            FrameSide::V => PathPoint::V { offset: p.v().len() - self.left.len() },
            FrameSide::VInv => PathPoint::V { offset: self.left.len() },
            FrameSide::W => PathPoint::W { k: 1, offset: p.w.len() - self.left.len() },
            FrameSide::WInv => PathPoint::W { k: -1, offset: p.w.len() - self.left.len() },
        }
    }

    /// The final point shared by every monomial of a support in this frame.
    pub fn final_point(&self, p: &Params) -> PathPoint {
        match self.right_kind {
            FrameSide::Empty => PathPoint::origin(),
            FrameSide::V => PathPoint::V { offset: self.right.len() },
            FrameSide::VInv => PathPoint::V { offset: p.v().len() - self.right.len() },
            FrameSide::W => PathPoint::W { k: 1, offset: self.right.len() },
            FrameSide::WInv => PathPoint::W { k: -1, offset: self.right.len() },
        }
    }
}

/// The monomial sum of one multi-turn: incident monomials sharing the frame
/// and anchor, the vanishing polynomial behind them, and the recorded
/// membership certificate.
#[derive(Debug, Clone)]
pub struct Support {
    pub monomials: BTreeSet<Word>,
    pub frame: Frame,
    pub poly: LaurentPoly2,
    cert: Option<Certificate>,
}

impl Support {
    pub fn anchor(&self, p: &Params) -> (PathPoint, PathPoint) {
        (self.frame.initial_point(p), self.frame.final_point(p))
    }

    /// The recorded derivation, when the support was built by the engine.
    pub fn certificate(&self) -> Result<Certificate, MultiTurnError> {
        self.cert.clone().ok_or(MultiTurnError::NoDerivation)
    }

    /// A support assembled by hand, with no derivation log.
    pub fn from_raw_monomials(
        monomials: BTreeSet<Word>,
        frame: Frame,
        poly: LaurentPoly2,
    ) -> Support {
        Support { monomials, frame, poly, cert: None }
    }
}

pub fn certificate_for(s: &Support) -> Result<Certificate, MultiTurnError> {
    s.certificate()
}

/// The word value of a Laurent monomial under x₁ := v, x₂ := w.
pub fn monomial_word(m: &LaurentMonomial, p: &Params) -> Word {
    let mut acc = Word::identity();
    for &(var, e) in m.factors() {
        let base = match var {
            Var::X1 => p.v_word().pow(e),
            Var::X2 => p.w.pow(e),
        };
        acc = acc.multiply(&base);
    }
    acc
}

fn is_rewriter_normal(m: &LaurentMonomial) -> bool {
    match m.factors() {
        [] => true,
        [(Var::X1, e)] => *e > 0,
        [(Var::X2, _)] => true,
        _ => false,
    }
}

/// Runs the rewriting loop to completion on a mod-2 set of monomials.
/// Returns the normal-form residual and the logged pairs.
pub fn normal_form(
    monomials: &[LaurentMonomial],
    p: &Params,
) -> (Vec<LaurentMonomial>, Certificate) {
    let mut set: BTreeSet<LaurentMonomial> = BTreeSet::new();
    for m in monomials {
        toggle(&mut set, m.clone());
    }
    let mut pairs: Vec<(Word, Word)> = Vec::new();
    loop {
        let target = set.iter().find(|m| !is_rewriter_normal(m)).cloned();
        let m = match target {
            Some(m) => m,
            None => break,
        };
        set.remove(&m);
        rewrite_step(&m, &mut set, &mut pairs, p);
    }
    (set.into_iter().collect(), Certificate { pairs })
}

/// Rewrites P(v, w) to its normal form inside Z₂F, logging one certificate
/// pair per step.  Returns the certificate when the residual is empty, i.e.
/// exactly when P vanishes at ((1+w)⁻¹, w).
pub fn decompose_in_ideal(
    poly: &LaurentPoly2,
    p: &Params,
) -> Result<Certificate, MultiTurnError> {
    let (residual, cert) = normal_form(poly.monomials(), p);
    if residual.is_empty() {
        Ok(cert)
    } else {
        Err(MultiTurnError::NotVanishing)
    }
}

fn toggle(set: &mut BTreeSet<LaurentMonomial>, m: LaurentMonomial) {
    if !set.remove(&m) {
        set.insert(m);
    }
}

fn splice_factors(
    before: &[(Var, i64)],
    middle: &[(Var, i64)],
    after: &[(Var, i64)],
) -> LaurentMonomial {
    let mut fs = before.to_vec();
    fs.extend_from_slice(middle);
    fs.extend_from_slice(after);
    LaurentMonomial::from_factors(fs)
}

fn rewrite_step(
    m: &LaurentMonomial,
    set: &mut BTreeSet<LaurentMonomial>,
    pairs: &mut Vec<(Word, Word)>,
    p: &Params,
) {
    let fs = m.factors();
    let word_of = |factors: &[(Var, i64)]| {
        monomial_word(&LaurentMonomial::from_factors(factors.to_vec()), p)
    };
    // rule 1: eliminate one v⁻¹ at the leftmost negative x₁ block
    if let Some(i) = fs.iter().position(|&(v, e)| v == Var::X1 && e < 0) {
        let (before, rest) = fs.split_at(i);
        let e = rest[0].1;
        let after = &rest[1..];
        // L·v⁻¹·R with L = before·x₁^{e+1}: pair (L·v⁻¹, R) = (word(before·x₁^e), word(after))
        let mut l_fact = before.to_vec();
        l_fact.push((Var::X1, e));
        pairs.push((word_of(&l_fact), word_of(after)));
        toggle(set, splice_factors(before, &[(Var::X1, e + 1)], after));
        toggle(set, splice_factors(before, &[(Var::X1, e + 1), (Var::X2, 1)], after));
        return;
    }
    // rule 2: move a positive v left past one w (wv → vw / w⁻¹v → vw⁻¹)
    if let Some(i) = fs
        .windows(2)
        .position(|w| w[0].0 == Var::X2 && w[1].0 == Var::X1 && w[1].1 > 0)
    {
        let before = &fs[..i];
        let k = fs[i].1;
        let l = fs[i + 1].1;
        let after = &fs[i + 2..];
        let step = if k > 0 { 1 } else { -1 };
        // context: A·x₂^{k−step}·(x₂^{step} x₁)·x₁^{l−1}·B
        let mut a_fact = before.to_vec();
        a_fact.push((Var::X2, k - step));
        let mut b_fact = vec![(Var::X1, l - 1)];
        b_fact.extend_from_slice(after);
        let la = word_of(&a_fact);
        let rb = word_of(&b_fact);
        let v = p.v_word();
        let w_step = p.w.pow(step);
        if step > 0 {
            // wv + vw = g + v⁻¹gv wrapped in (La, Rb)
            pairs.push((la.clone(), rb.clone()));
            pairs.push((la.multiply(&v.invert()), v.multiply(&rb)));
        } else {
            // w⁻¹v + vw⁻¹ = w⁻¹(g + v⁻¹gv)w⁻¹ wrapped in (La, Rb)
            let lw = la.multiply(&w_step);
            let wr = w_step.multiply(&rb);
            pairs.push((lw.clone(), wr.clone()));
            pairs.push((lw.multiply(&v.invert()), v.multiply(&wr)));
        }
        toggle(
            set,
            splice_factors(
                &a_fact,
                &[(Var::X1, 1), (Var::X2, step), (Var::X1, l - 1)],
                after,
            ),
        );
        return;
    }
    // rules 3/4: the monomial is x₁^a x₂^b with a ≥ 1, b ≠ 0
    if let [(Var::X1, a), (Var::X2, b)] = fs {
        let (a, b) = (*a, *b);
        debug_assert!(a >= 1 && b != 0);
        let l_word = p.v_word().pow(a - 1);
        if b > 0 {
            // vw → 1 + v: pair (v^{a−1}, w^{b−1})
            pairs.push((l_word, p.w.pow(b - 1)));
            toggle(set, splice_factors(&[], &[(Var::X1, a - 1), (Var::X2, b - 1)], &[]));
            toggle(set, splice_factors(&[], &[(Var::X1, a), (Var::X2, b - 1)], &[]));
        } else {
            // vw⁻¹ → v + w⁻¹: pair (v^{a−1}, w^{b})
            pairs.push((l_word, p.w.pow(b)));
            toggle(set, splice_factors(&[], &[(Var::X1, a), (Var::X2, b + 1)], &[]));
            toggle(set, splice_factors(&[], &[(Var::X1, a - 1), (Var::X2, b)], &[]));
        }
        return;
    }
    unreachable!("non-normal monomial not matched by any rule: {m:?}");
}

/// Builds the support of the multi-turn family defined by a vanishing
/// polynomial and a frame: substitutes v, w into each term, wraps it with
/// the frame, freely reduces, and cancels duplicates mod 2.
pub fn support_from_poly(
    poly: &LaurentPoly2,
    frame: &Frame,
    p: &Params,
) -> Result<Support, MultiTurnError> {
    if !poly.vanishes_at_inverse() {
        return Err(MultiTurnError::NotVanishing);
    }
    let core = decompose_in_ideal(poly, p)?;
    let pairs = core
        .pairs
        .into_iter()
        .map(|(l, r)| (frame.left.multiply(&l), r.multiply(&frame.right)))
        .collect();
    let mut monomials: BTreeSet<Word> = BTreeSet::new();
    for m in poly.monomials() {
        let word = frame
            .left
            .multiply(&monomial_word(m, p))
            .multiply(&frame.right);
        if !monomials.remove(&word) {
            monomials.insert(word);
        }
    }
    Ok(Support {
        monomials,
        frame: frame.clone(),
        poly: poly.clone(),
        cert: Some(Certificate { pairs }),
    })
}

/// Re-expresses a path with positive-direction v-frames: the frame pair and
/// the Laurent monomial M with a_h = frame.left · M(v,w) · frame.right
/// (cancellations allowed).  Inverse v-fragments are rewritten through whole
/// v⁻¹ factors so the frame itself never carries v⁻¹ material.
pub fn positive_frame(
    path: &GfpPath,
    p: &Params,
) -> Result<(Frame, LaurentMonomial), MultiTurnError> {
    let (left, right, factors) = crate::gfp::frame_decomposition(path, p);
    let frame = Frame::new(left, right, p)?;
    let monomial = LaurentMonomial::from_factors(
        factors
            .into_iter()
            .map(|(is_v, e)| (if is_v { Var::X1 } else { Var::X2 }, e))
            .collect(),
    );
    Ok((frame, monomial))
}

/// An elementary multi-turn of the monomial at `a_h` within the family of a
/// vanishing polynomial: the support plus the replacement monomials.
pub fn elementary_multi_turn(
    a_h: &GfpPath,
    poly: &LaurentPoly2,
    p: &Params,
) -> Result<(Support, Vec<Word>), MultiTurnError> {
    let (frame, m_h) = positive_frame(a_h, p)?;
    if !poly.monomials().contains(&m_h) {
        return Err(MultiTurnError::NotInSupport);
    }
    let support = support_from_poly(poly, &frame, p)?;
    let a_word = a_h.assemble(p);
    if !support.monomials.contains(&a_word) {
        return Err(MultiTurnError::NotInSupport);
    }
    let replacement = support
        .monomials
        .iter()
        .filter(|w| **w != a_word)
        .cloned()
        .collect();
    Ok((support, replacement))
}

/// The safe multi-turn of Prop.-6.1 type: every output is a λ-semicanonical
/// GFP of measure ≥ τ containing no v⁻¹-window of measure above ε.
///
/// Construction: collapse the spine commutatively to w^k v^l, then
///   l > 0:  M_h ↦ w^k v^l            (or M_h·(v+vw) when already collapsed)
///   l = 0:  M_h ↦ w^k (v + vw)
///   l < 0:  M_h ↦ w^k (v + vw²)^{−l}
pub fn safe_multi_turn(a_h: &GfpPath, p: &Params) -> Result<Support, MultiTurnError> {
    let (frame, m_h) = positive_frame(a_h, p)?;
    let k: i64 = m_h
        .factors()
        .iter()
        .filter(|(v, _)| *v == Var::X2)
        .map(|&(_, e)| e)
        .sum();
    let l: i64 = m_h
        .factors()
        .iter()
        .filter(|(v, _)| *v == Var::X1)
        .map(|&(_, e)| e)
        .sum();
    let wk = LaurentMonomial::x2(k);
    let mut others: Vec<LaurentMonomial> = Vec::new();
    if l > 0 {
        let collapsed = wk.mul(&LaurentMonomial::x1(l));
        if collapsed == m_h {
            // already sorted: use M_h·(1 ↦ v + vw) instead
            others.push(m_h.mul(&LaurentMonomial::x1(1)));
            others.push(m_h.mul(&LaurentMonomial::x1(1)).mul(&LaurentMonomial::x2(1)));
        } else {
            others.push(collapsed);
        }
    } else if l == 0 {
        others.push(wk.mul(&LaurentMonomial::x1(1)));
        others.push(wk.mul(&LaurentMonomial::x1(1)).mul(&LaurentMonomial::x2(1)));
    } else {
        // (v + vw²)^{−l}: all products of −l factors v·w^{2δ}
        let m = (-l) as usize;
        let mut expansions: Vec<LaurentMonomial> = vec![wk];
        for _ in 0..m {
            let mut next = Vec::with_capacity(expansions.len() * 2);
            for e in &expansions {
                next.push(e.mul(&LaurentMonomial::x1(1)));
                next.push(e.mul(&LaurentMonomial::x1(1)).mul(&LaurentMonomial::x2(2)));
            }
            expansions = next;
        }
        others = expansions;
    }
    let mut monomials = vec![m_h];
    monomials.extend(others);
    let poly = LaurentPoly2::from_monomials(monomials);
    support_from_poly(&poly, &frame, p)
}

/// Applies a multi-turn at an occurrence: Σ_{j≠h} L·a_j·R, each output
/// freely reduced, duplicates cancelled mod 2.
pub fn apply_multi_turn(
    u: &Word,
    span: (usize, usize),
    support: &Support,
    p: &Params,
) -> Result<BTreeSet<Word>, MultiTurnError> {
    let _ = p;
    let a_word = u.slice(span.0, span.1);
    if !support.monomials.contains(&a_word) {
        return Err(MultiTurnError::NotInSupport);
    }
    let left = u.slice(0, span.0);
    let right = u.slice(span.1, u.len());
    let mut out: BTreeSet<Word> = BTreeSet::new();
    for a_j in &support.monomials {
        if *a_j == a_word {
            continue;
        }
        let w = left.multiply(a_j).multiply(&right);
        if !out.remove(&w) {
            out.insert(w);
        }
    }
    Ok(out)
}

/// The three monomials {1, v, vw} of the generator.
pub fn generator_monomials(p: &Params) -> BTreeSet<Word> {
    let v = p.v_word().clone();
    let vw = v.multiply(&p.w);
    [Word::identity(), v, vw].into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfp::parse_gfp;

    fn desk() -> Params {
        Params::desk_scale()
    }

    fn set(words: &[&Word]) -> BTreeSet<Word> {
        words.iter().map(|w| (*w).clone()).collect()
    }

    #[test]
    fn generator_support_and_certificate() {
        let p = desk();
        let s = support_from_poly(&LaurentPoly2::generator(), &Frame::trivial(), &p).unwrap();
        assert_eq!(s.monomials, generator_monomials(&p));
        let cert = s.certificate().unwrap();
        assert!(check_certificate(&s.monomials, &cert, &p));
        // the generator certifies as a single pair (1, 1)
        assert_eq!(cert.pairs, vec![(Word::identity(), Word::identity())]);
    }

    #[test]
    fn commutator_support() {
        let p = desk();
        let poly = LaurentPoly2::from_monomials(vec![
            LaurentMonomial::x1(1).mul(&LaurentMonomial::x2(1)),
            LaurentMonomial::x2(1).mul(&LaurentMonomial::x1(1)),
        ]);
        let s = support_from_poly(&poly, &Frame::trivial(), &p).unwrap();
        let v = p.v_word().clone();
        let vw = v.multiply(&p.w);
        let wv = p.w.multiply(&v);
        assert_eq!(s.monomials, set(&[&vw, &wv]));
        assert!(check_certificate(&s.monomials, &s.certificate().unwrap(), &p));
    }

    #[test]
    fn hand_written_certificates_pass_the_oracle() {
        let p = desk();
        let v = p.v_word().clone();
        let vw = v.multiply(&p.w);
        let wv = p.w.multiply(&v);
        let one = Word::identity();

        // {1, v, vw} ↔ [(1,1)]
        let c = Certificate { pairs: vec![(one.clone(), one.clone())] };
        assert!(check_certificate(&generator_monomials(&p), &c, &p));
        // e = v is not certified by [(1,1)]
        assert!(!check_certificate(&set(&[&v]), &c, &p));

        // {vw, wv} ↔ [(1,1), (v⁻¹, v)]
        let c = Certificate {
            pairs: vec![(one.clone(), one.clone()), (v.invert(), v.clone())],
        };
        assert!(check_certificate(&set(&[&vw, &wv]), &c, &p));

        // P₁(k=2) support {vw², w, 1, v} ↔ [(1,1), (1,w)]
        let vww = vw.multiply(&p.w);
        let c = Certificate {
            pairs: vec![(one.clone(), one.clone()), (one.clone(), p.w.clone())],
        };
        assert!(check_certificate(&set(&[&vww, &p.w, &one, &v]), &c, &p));
    }

    #[test]
    fn p1_p2_families_are_certified_by_the_rewriter() {
        let p = desk();
        for k in 1..=4 {
            for poly in [LaurentPoly2::p1(k), LaurentPoly2::p2(k)] {
                let s = support_from_poly(&poly, &Frame::trivial(), &p).unwrap();
                assert!(
                    check_certificate(&s.monomials, &s.certificate().unwrap(), &p),
                    "k = {k}"
                );
            }
        }
    }

    #[test]
    fn non_vanishing_polynomial_is_rejected() {
        let p = desk();
        let poly = LaurentPoly2::from_monomials(vec![
            LaurentMonomial::x1(1),
            LaurentMonomial::x2(1),
        ]);
        assert_eq!(
            support_from_poly(&poly, &Frame::trivial(), &p).unwrap_err(),
            MultiTurnError::NotVanishing
        );
    }

    #[test]
    fn elementary_multi_turn_of_vw() {
        let p = desk();
        let vw = p.v_word().multiply(&p.w);
        let path = parse_gfp(&vw, &p).unwrap();
        let (support, replacement) =
            elementary_multi_turn(&path, &LaurentPoly2::generator(), &p).unwrap();
        assert_eq!(support.monomials, generator_monomials(&p));
        assert_eq!(replacement, vec![Word::identity(), p.v_word().clone()]);
    }

    #[test]
    fn elementary_multi_turn_of_identity() {
        let p = desk();
        let path = parse_gfp(&Word::identity(), &p).unwrap();
        let (_, replacement) =
            elementary_multi_turn(&path, &LaurentPoly2::generator(), &p).unwrap();
        let v = p.v_word().clone();
        let vw = v.multiply(&p.w);
        assert_eq!(replacement, vec![v, vw]);
    }

    #[test]
    fn safe_multi_turn_of_v_inverse() {
        let p = desk();
        let vinv = p.v_word().invert();
        let path = parse_gfp(&vinv, &p).unwrap();
        let s = safe_multi_turn(&path, &p).unwrap();
        let v = p.v_word().clone();
        let vww = v.multiply(&p.w).multiply(&p.w);
        assert_eq!(s.monomials, set(&[&vinv, &v, &vww]));
        assert!(check_certificate(&s.monomials, &s.certificate().unwrap(), &p));
    }

    #[test]
    fn safe_multi_turn_collapses_commutatively() {
        let p = desk();
        // w·v⁻¹·w has net l = −1, k = 2: outputs w²v and w²vw²
        let u = p.w.multiply(&p.v_word().invert()).multiply(&p.w);
        let path = parse_gfp(&u, &p).unwrap();
        let s = safe_multi_turn(&path, &p).unwrap();
        let v = p.v_word();
        let w2v = p.w.pow(2).multiply(v);
        let w2vw2 = w2v.multiply(&p.w.pow(2));
        assert_eq!(s.monomials, set(&[&u, &w2v, &w2vw2]));
        assert!(check_certificate(&s.monomials, &s.certificate().unwrap(), &p));
    }

    #[test]
    fn safe_multi_turn_outputs_are_big_and_clean() {
        let p = desk();
        let tau_ys = p.tau_ys();
        for word in [
            p.v_word().invert(),
            p.w.multiply(&p.v_word().invert()),
            p.w.pow(2),
            p.v_word().clone(),
        ] {
            let path = parse_gfp(&word, &p).unwrap();
            let s = safe_multi_turn(&path, &p).unwrap();
            for m in s.monomials.iter().filter(|m| **m != word) {
                let ys = m.count_gen(crate::freegroup::Alphabet::Y);
                assert!(ys >= tau_ys, "output below τ for {word}");
                assert!(
                    crate::gfp::max_inverse_v_window_ys(m, &p) <= 1,
                    "deep v⁻¹ window in output of {word}"
                );
            }
        }
    }

    #[test]
    fn apply_multi_turn_substitutes_in_context() {
        let p = desk();
        let v = p.v_word().clone();
        let vw = v.multiply(&p.w);
        let z = Word::parse("z", &p.alphabet).unwrap();
        let t = Word::parse("t", &p.alphabet).unwrap();
        let u = z.multiply(&vw).multiply(&t);
        let s = support_from_poly(&LaurentPoly2::generator(), &Frame::trivial(), &p).unwrap();
        let out = apply_multi_turn(&u, (1, 1 + vw.len()), &s, &p).unwrap();
        let zvt = z.multiply(&v).multiply(&t);
        let zt = z.multiply(&t);
        assert_eq!(out, set(&[&zvt, &zt]));

        // vw ↦ v + 1 on the bare word
        let out = apply_multi_turn(&vw, (0, vw.len()), &s, &p).unwrap();
        assert_eq!(out, set(&[&v, &Word::identity()]));
    }

    #[test]
    fn positive_frame_of_middle_inverse_fragment() {
        let p = desk();
        // v_m⁻¹ built from v = v_i v_m v_f
        let v = p.v_word();
        let a = 1000;
        let b = 4000;
        let vm_inv = v.slice(a, b).invert();
        let path = parse_gfp(&vm_inv, &p).unwrap();
        let (frame, m) = positive_frame(&path, &p).unwrap();
        assert_eq!(m, LaurentMonomial::x1(-1));
        // frame.left · v⁻¹ · frame.right reassembles the fragment
        let rebuilt = frame.left.multiply(&v.invert()).multiply(&frame.right);
        assert_eq!(rebuilt, vm_inv);
        assert_eq!(frame.left_kind, FrameSide::V);
        assert_eq!(frame.right_kind, FrameSide::V);
    }
}
