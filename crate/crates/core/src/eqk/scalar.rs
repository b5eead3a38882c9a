//! Rational functions in `Λ^{1/M}` over `ℚ(ζ_M)`: the scalar field of the
//! localized K-theory.

use std::fmt;

use super::cyclo::Cyclo;
use super::laurent::{LaurentPoly, UnitMonomial};
use crate::linalg::Q;

/// `num / Π f_i^{k_i}` with every `f_i` a normalized polynomial (no monomial
/// factor, leading coefficient one) that does not divide `num`.
#[derive(Clone)]
pub struct CycloScalar {
    num: LaurentPoly,
    den: Vec<(LaurentPoly, u32)>,
}

impl CycloScalar {
    pub fn zero(m: u32, nvars: usize) -> Self {
        Self::from_poly(LaurentPoly::zero(m, nvars))
    }

    pub fn one(m: u32, nvars: usize) -> Self {
        Self::from_poly(LaurentPoly::one(m, nvars))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        CycloScalar {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn from_unit(u: &UnitMonomial) -> Self {
        Self::from_poly(u.to_poly())
    }

    pub fn from_cyclo(c: Cyclo, nvars: usize) -> Self {
        Self::from_poly(LaurentPoly::constant(c, nvars))
    }

    pub fn order(&self) -> u32 {
        self.num.order()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominators(&self) -> &[(LaurentPoly, u32)] {
        &self.den
    }

    /// The value as a Laurent polynomial, when it is one.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// Divides by `p`, which must be nonzero.
    fn push_den(&mut self, p: &LaurentPoly, mult: u32) {
        if mult == 0 || self.num.is_zero() {
            return;
        }
        let (lc, shift, f) = p.normalize().expect("division by zero scalar");
        let unit = UnitMonomial::new(self.order(), 0, shift.iter().map(|x| -x).collect());
        let lcinv = lc.inv().expect("nonzero leading coefficient");
        for _ in 0..mult {
            self.num = self.num.mul_unit(&unit).scale(&lcinv);
        }
        if f.is_one() {
            return;
        }
        let mut k = mult;
        while k > 0 {
            match self.num.div_exact(&f) {
                Some(q) => {
                    self.num = q;
                    k -= 1;
                }
                None => break,
            }
        }
        if k == 0 {
            return;
        }
        match self.den.iter_mut().find(|(g, _)| *g == f) {
            Some((_, e)) => *e += k,
            None => self.den.push((f, k)),
        }
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, k) in self.den.iter_mut() {
            while *k > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *k -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, k)| *k > 0);
    }

    pub fn div_poly(&self, p: &LaurentPoly) -> CycloScalar {
        let mut out = self.clone();
        out.push_den(p, 1);
        out
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> CycloScalar {
        let mut out = CycloScalar {
            num: self.num.mul(p),
            den: self.den.clone(),
        };
        out.cancel();
        out
    }

    pub fn mul_unit(&self, u: &UnitMonomial) -> CycloScalar {
        CycloScalar {
            num: self.num.mul_unit(u),
            den: self.den.clone(),
        }
    }

    pub fn scale_q(&self, x: &Q) -> CycloScalar {
        let mut out = CycloScalar {
            num: self.num.scale_q(x),
            den: self.den.clone(),
        };
        out.cancel();
        out
    }

    pub fn scale(&self, c: &Cyclo) -> CycloScalar {
        let mut out = CycloScalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        };
        out.cancel();
        out
    }

    pub fn neg(&self) -> CycloScalar {
        CycloScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, o: &CycloScalar) -> CycloScalar {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        // least common multiple of the factor multisets
        let mut lcm: Vec<(LaurentPoly, u32)> = self.den.clone();
        for (f, k) in &o.den {
            match lcm.iter_mut().find(|(g, _)| g == f) {
                Some((_, e)) => *e = (*e).max(*k),
                None => lcm.push((f.clone(), *k)),
            }
        }
        let cofactor = |den: &[(LaurentPoly, u32)]| {
            let mut c = LaurentPoly::one(self.order(), self.nvars());
            for (f, k) in &lcm {
                let have = den.iter().find(|(g, _)| g == f).map_or(0, |(_, e)| *e);
                c = c.mul(&f.pow(k - have));
            }
            c
        };
        let num = self
            .num
            .mul(&cofactor(&self.den))
            .add(&o.num.mul(&cofactor(&o.den)));
        let mut out = CycloScalar { num, den: lcm };
        out.cancel();
        out
    }

    pub fn sub(&self, o: &CycloScalar) -> CycloScalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &CycloScalar) -> CycloScalar {
        if self.is_zero() || o.is_zero() {
            return CycloScalar::zero(self.order(), self.nvars());
        }
        let mut out = CycloScalar {
            num: self.num.mul(&o.num),
            den: self.den.clone(),
        };
        for (f, k) in &o.den {
            match out.den.iter_mut().find(|(g, _)| g == f) {
                Some((_, e)) => *e += k,
                None => out.den.push((f.clone(), *k)),
            }
        }
        out.cancel();
        out
    }

    pub fn inv(&self) -> Option<CycloScalar> {
        if self.is_zero() {
            return None;
        }
        let mut num = LaurentPoly::one(self.order(), self.nvars());
        for (f, k) in &self.den {
            num = num.mul(&f.pow(*k));
        }
        let mut out = CycloScalar::from_poly(num);
        out.push_den(&self.num, 1);
        Some(out)
    }

    pub fn div(&self, o: &CycloScalar) -> Option<CycloScalar> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: u32) -> CycloScalar {
        (0..k).fold(CycloScalar::one(self.order(), self.nvars()), |a, _| a.mul(self))
    }

    fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> CycloScalar {
        let mut out = CycloScalar::from_poly(f(&self.num));
        for (g, k) in &self.den {
            out.push_den(&f(g), *k);
        }
        out
    }

    /// The automorphism `ζ_M ↦ ζ_M^a` acting on coefficients.
    pub fn galois(&self, a: i64) -> CycloScalar {
        self.map(|p| p.galois(a))
    }

    /// `Λ_k^{1/M} ↦ ζ_M^{step}·Λ_k^{1/M}`.
    pub fn kummer(&self, k: usize, step: i64) -> CycloScalar {
        self.map(|p| p.kummer(k, step))
    }

    /// Whether the value lies in `ℚ(ζ_{M0})(Λ^{1/M0})`, decided by
    /// invariance under the automorphisms fixing that subfield.
    pub fn in_subfield(&self, m0: u32) -> bool {
        let m = self.order();
        assert_eq!(m % m0, 0, "subfield order must divide the field order");
        let fixed_galois = (1..m as i64)
            .filter(|&a| num_integer::gcd(a, m as i64) == 1 && a % m0 as i64 == 1 % m0 as i64)
            .all(|a| self.galois(a) == *self);
        fixed_galois && (0..self.nvars()).all(|k| self.kummer(k, m0 as i64) == *self)
    }

    pub fn embed(&self, m2: u32) -> CycloScalar {
        let step = (m2 / self.order()) as i64;
        self.map(|p| {
            let mut out = LaurentPoly::zero(m2, p.nvars());
            for (e, c) in p.terms() {
                let e2 = e.iter().map(|x| x * step).collect();
                out = out.add(&LaurentPoly::monomial(c.embed(m2), e2));
            }
            out
        })
    }

    pub fn format_with(&self, labels: &[String]) -> String {
        let num = self.num.format_with(labels);
        if self.den.is_empty() {
            return num;
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(f, k)| {
                if *k == 1 {
                    format!("({})", f.format_with(labels))
                } else {
                    format!("({})^{k}", f.format_with(labels))
                }
            })
            .collect();
        format!("({num}) / {}", den.join("*"))
    }
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.den.is_empty() && other.den.is_empty() {
            return self.num == other.num;
        }
        self.sub(other).is_zero()
    }
}

impl Eq for CycloScalar {}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&[]))
    }
}
