//! Exact arithmetic in Z₂[w] and Z₂(w), plus non-commutative Laurent
//! polynomials in two variables and the vanishing test
//! `P((1+w)⁻¹, w) = 0` that characterizes the supports of multi-turns.

use crate::gfp::{GfpPath, SpineStep};
use std::fmt;

/// A GF(2) polynomial in one variable, stored as the sorted set of exponents
/// with nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    exponents: Vec<u32>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { exponents: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2 { exponents: vec![0] }
    }

    /// x^k
    pub fn monomial(k: u32) -> Self {
        Poly2 { exponents: vec![k] }
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        exps.sort_unstable();
        let mut out = Vec::with_capacity(exps.len());
        let mut i = 0;
        while i < exps.len() {
            let mut j = i;
            while j < exps.len() && exps[j] == exps[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                out.push(exps[i]);
            }
            i = j;
        }
        Poly2 { exponents: out }
    }

    /// 1 + x
    pub fn one_plus_w() -> Self {
        Poly2 { exponents: vec![0, 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.exponents.last().copied()
    }

    /// Multiplicity of the root 0, i.e. the lowest exponent present.
    pub fn trailing(&self) -> Option<u32> {
        self.exponents.first().copied()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        // symmetric difference of two sorted sets
        let (a, b) = (&self.exponents, &other.exponents);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly2 { exponents: out }
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut exps = Vec::with_capacity(self.exponents.len() * other.exponents.len());
        for &a in &self.exponents {
            for &b in &other.exponents {
                exps.push(a + b);
            }
        }
        Poly2::from_exponents(exps)
    }

    pub fn shl(&self, k: u32) -> Poly2 {
        Poly2 { exponents: self.exponents.iter().map(|e| e + k).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly2 {
        let mut acc = Poly2::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder of GF(2) long division; `divisor` nonzero.
    pub fn div_rem(&self, divisor: &Poly2) -> (Poly2, Poly2) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let d = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut quot = Poly2::zero();
        while let Some(r) = rem.degree() {
            if r < d {
                break;
            }
            let shift = r - d;
            quot = quot.add(&Poly2::monomial(shift));
            rem = rem.add(&divisor.shl(shift));
        }
        (quot, rem)
    }

    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .exponents
            .iter()
            .map(|&e| match e {
                0 => "1".to_string(),
                1 => "w".to_string(),
                _ => format!("w^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

/// An element of Z₂(w) in the canonical form `w^shift · num/den` where num
/// and den are coprime, den(0) = 1 and (for nonzero values) num(0) = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rat2 {
    num: Poly2,
    den: Poly2,
    shift: i64,
}

impl Rat2 {
    pub fn zero() -> Self {
        Rat2 { num: Poly2::zero(), den: Poly2::one(), shift: 0 }
    }

    pub fn one() -> Self {
        Rat2 { num: Poly2::one(), den: Poly2::one(), shift: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn new(num: Poly2, den: Poly2, shift: i64) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = Rat2 { num, den, shift };
        r.normalize();
        r
    }

    /// w^k as a rational value.
    pub fn w_power(k: i64) -> Self {
        Rat2 { num: Poly2::one(), den: Poly2::one(), shift: k }
    }

    /// (1+w)^k for k of either sign.
    pub fn one_plus_w_power(k: i64) -> Self {
        if k >= 0 {
            Rat2::new(Poly2::one_plus_w().pow(k as u32), Poly2::one(), 0)
        } else {
            Rat2::new(Poly2::one(), Poly2::one_plus_w().pow((-k) as u32), 0)
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly2::one();
            self.shift = 0;
            return;
        }
        if let Some(t) = self.num.trailing() {
            if t > 0 {
                self.num = self.num.div_rem(&Poly2::monomial(t)).0;
                self.shift += t as i64;
            }
        }
        if let Some(t) = self.den.trailing() {
            if t > 0 {
                self.den = self.den.div_rem(&Poly2::monomial(t)).0;
                self.shift -= t as i64;
            }
        }
        let g = self.num.gcd(&self.den);
        if g.degree() != Some(0) {
            self.num = self.num.div_rem(&g).0;
            self.den = self.den.div_rem(&g).0;
        }
    }

    pub fn add(&self, other: &Rat2) -> Rat2 {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let m = self.shift.min(other.shift);
        let a = self.num.shl((self.shift - m) as u32).mul(&other.den);
        let b = other.num.shl((other.shift - m) as u32).mul(&self.den);
        Rat2::new(a.add(&b), self.den.mul(&other.den), m)
    }

    pub fn mul(&self, other: &Rat2) -> Rat2 {
        Rat2::new(
            self.num.mul(&other.num),
            self.den.mul(&other.den),
            self.shift + other.shift,
        )
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }
}

impl fmt::Display for Rat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "w^{}·({})/({})", self.shift, self.num, self.den)
    }
}

/// One of the two non-commuting variables of a Laurent polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Substituted by (1+w)⁻¹ (i.e. by v).
    X1,
    /// Substituted by w.
    X2,
}

/// A monomial in two non-commuting variables with integer exponents, kept
/// canonical: no zero exponents, adjacent equal variables merged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentMonomial {
    factors: Vec<(Var, i64)>,
}

impl LaurentMonomial {
    pub fn one() -> Self {
        LaurentMonomial { factors: Vec::new() }
    }

    pub fn from_factors(factors: Vec<(Var, i64)>) -> Self {
        let mut out: Vec<(Var, i64)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((lv, le)) if *lv == v => {
                    *le += e;
                    if *le == 0 {
                        out.pop();
                        // merging may expose a new adjacency
                        if let Some(&(pv, _)) = out.last() {
                            let _ = pv;
                        }
                    }
                }
                _ => out.push((v, e)),
            }
            // re-merge after a pop collapsed neighbours
            while out.len() >= 2 {
                let n = out.len();
                if out[n - 2].0 == out[n - 1].0 {
                    let (_, e2) = out.pop().unwrap();
                    out[n - 2].1 += e2;
                    if out[n - 2].1 == 0 {
                        out.pop();
                    }
                } else {
                    break;
                }
            }
        }
        LaurentMonomial { factors: out }
    }

    pub fn factors(&self) -> &[(Var, i64)] {
        &self.factors
    }

    pub fn mul(&self, other: &LaurentMonomial) -> LaurentMonomial {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        LaurentMonomial::from_factors(factors)
    }

    /// x₁^e
    pub fn x1(e: i64) -> Self {
        LaurentMonomial::from_factors(vec![(Var::X1, e)])
    }

    /// x₂^e
    pub fn x2(e: i64) -> Self {
        LaurentMonomial::from_factors(vec![(Var::X2, e)])
    }
}

/// A non-commutative Laurent polynomial over Z₂ in x₁, x₂ (set semantics).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly2 {
    monomials: Vec<LaurentMonomial>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        LaurentPoly2 { monomials: Vec::new() }
    }

    pub fn one() -> Self {
        LaurentPoly2 { monomials: vec![LaurentMonomial::one()] }
    }

    pub fn from_monomials(monomials: Vec<LaurentMonomial>) -> Self {
        let mut out: Vec<LaurentMonomial> = Vec::new();
        for m in monomials {
            if let Some(pos) = out.iter().position(|x| *x == m) {
                out.remove(pos);
            } else {
                out.push(m);
            }
        }
        LaurentPoly2 { monomials: out }
    }

    pub fn monomials(&self) -> &[LaurentMonomial] {
        &self.monomials
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn add(&self, other: &LaurentPoly2) -> LaurentPoly2 {
        let mut all = self.monomials.clone();
        all.extend(other.monomials.iter().cloned());
        LaurentPoly2::from_monomials(all)
    }

    pub fn mul(&self, other: &LaurentPoly2) -> LaurentPoly2 {
        let mut all = Vec::with_capacity(self.monomials.len() * other.monomials.len());
        for a in &self.monomials {
            for b in &other.monomials {
                all.push(a.mul(b));
            }
        }
        LaurentPoly2::from_monomials(all)
    }

    /// The commutative image: substitutes x₁ := (1+w)⁻¹ and x₂ := w.
    pub fn rat_eval(&self) -> Rat2 {
        let mut acc = Rat2::zero();
        for m in &self.monomials {
            let mut term = Rat2::one();
            for &(v, e) in m.factors() {
                match v {
                    Var::X1 => term = term.mul(&Rat2::one_plus_w_power(-e)),
                    Var::X2 => term = term.mul(&Rat2::w_power(e)),
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Condition for `P(v, w)` to lie in the ideal ⟨1 + v + vw⟩.
    pub fn vanishes_at_inverse(&self) -> bool {
        self.rat_eval().is_zero()
    }

    /// The paper's example family vw^k + w^{k−1} + … + w + 1 + v, k ≥ 1.
    pub fn p1(k: i64) -> LaurentPoly2 {
        assert!(k >= 1);
        let mut monomials = vec![LaurentMonomial::x1(1).mul(&LaurentMonomial::x2(k))];
        for i in 0..k {
            monomials.push(LaurentMonomial::x2(i));
        }
        monomials.push(LaurentMonomial::x1(1));
        LaurentPoly2::from_monomials(monomials)
    }

    /// The paper's example family vw^{−k} + w^{−k} + … + w^{−1} + v, k ≥ 1.
    pub fn p2(k: i64) -> LaurentPoly2 {
        assert!(k >= 1);
        let mut monomials = vec![LaurentMonomial::x1(1).mul(&LaurentMonomial::x2(-k))];
        for i in 1..=k {
            monomials.push(LaurentMonomial::x2(-i));
        }
        monomials.push(LaurentMonomial::x1(1));
        LaurentPoly2::from_monomials(monomials)
    }

    /// 1 + x₁ + x₁x₂, the generator itself.
    pub fn generator() -> LaurentPoly2 {
        LaurentPoly2::from_monomials(vec![
            LaurentMonomial::one(),
            LaurentMonomial::x1(1),
            LaurentMonomial::x1(1).mul(&LaurentMonomial::x2(1)),
        ])
    }
}

/// The commutative shadow of a path: v ↦ (1+w)⁻¹ and w ↦ w applied to the
/// spine only.  The fractional prefix and suffix are ignored — they are
/// common to all incident monomials with the same initial and final points.
pub fn shadow(path: &GfpPath) -> Rat2 {
    let mut v_exp = 0i64;
    let mut w_exp = 0i64;
    for step in path.spine() {
        match *step {
            SpineStep::V(e) => v_exp += e as i64,
            SpineStep::W(k) => w_exp += k,
        }
    }
    Rat2::one_plus_w_power(-v_exp).mul(&Rat2::w_power(w_exp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn poly_division_and_gcd() {
        // (1+w)^2 = 1 + w^2 over GF(2)
        let sq = Poly2::one_plus_w().mul(&Poly2::one_plus_w());
        assert_eq!(sq, Poly2::from_exponents(vec![0, 2]));
        let g = sq.gcd(&Poly2::one_plus_w());
        assert_eq!(g, Poly2::one_plus_w());
        let (q, r) = sq.div_rem(&Poly2::one_plus_w());
        assert_eq!(q, Poly2::one_plus_w());
        assert!(r.is_zero());
    }

    #[test]
    fn commutator_example_vanishes() {
        // x₁x₂ + x₂x₁
        let p = LaurentPoly2::from_monomials(vec![
            LaurentMonomial::x1(1).mul(&LaurentMonomial::x2(1)),
            LaurentMonomial::x2(1).mul(&LaurentMonomial::x1(1)),
        ]);
        assert!(p.vanishes_at_inverse());
    }

    #[test]
    fn generator_vanishes() {
        // 1 + (1+w)⁻¹ + (1+w)⁻¹w = 0
        assert!(LaurentPoly2::generator().vanishes_at_inverse());
    }

    #[test]
    fn x1_plus_x2_does_not_vanish() {
        let p = LaurentPoly2::from_monomials(vec![
            LaurentMonomial::x1(1),
            LaurentMonomial::x2(1),
        ]);
        let val = p.rat_eval();
        // (1+w)⁻¹ + w = (1 + w + w²)/(1+w)
        assert_eq!(val.num(), &Poly2::from_exponents(vec![0, 1, 2]));
        assert_eq!(val.den(), &Poly2::one_plus_w());
        assert_eq!(val.shift(), 0);
        assert!(!p.vanishes_at_inverse());

        let just_x1 = LaurentPoly2::from_monomials(vec![LaurentMonomial::x1(1)]);
        assert!(!just_x1.vanishes_at_inverse());
    }

    #[test]
    fn paper_p1_p2_families_vanish() {
        for k in 1..=4 {
            assert!(LaurentPoly2::p1(k).vanishes_at_inverse(), "P1 k={k}");
            assert!(LaurentPoly2::p2(k).vanishes_at_inverse(), "P2 k={k}");
        }
    }

    fn arb_monomial() -> impl Strategy<Value = LaurentMonomial> {
        proptest::collection::vec((any::<bool>(), -3i64..4), 0..4).prop_map(|fs| {
            LaurentMonomial::from_factors(
                fs.into_iter()
                    .map(|(v, e)| (if v { Var::X1 } else { Var::X2 }, e))
                    .collect(),
            )
        })
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly2> {
        proptest::collection::vec(arb_monomial(), 0..5).prop_map(LaurentPoly2::from_monomials)
    }

    proptest! {
        #[test]
        fn rat_eval_is_a_ring_homomorphism(p in arb_poly(), q in arb_poly()) {
            let sum = p.add(&q).rat_eval();
            prop_assert_eq!(sum, p.rat_eval().add(&q.rat_eval()));
            let prod = p.mul(&q).rat_eval();
            prop_assert_eq!(prod, p.rat_eval().mul(&q.rat_eval()));
        }

        #[test]
        fn rat2_canonical_equality(a in -4i64..5, b in -4i64..5) {
            // w^a (1+w)^b built two different ways compares structurally equal
            let direct = Rat2::w_power(a).mul(&Rat2::one_plus_w_power(b));
            let split = Rat2::w_power(a)
                .mul(&Rat2::one_plus_w_power(b + 2))
                .mul(&Rat2::one_plus_w_power(-2));
            prop_assert_eq!(direct, split);
        }
    }
}
