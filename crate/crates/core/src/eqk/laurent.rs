//! Laurent polynomials in `Λ_1^{1/M}, …, Λ_w^{1/M}` over `ℚ(ζ_M)`.
//!
//! Exponent vectors are stored as integers counting units of `1/M`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use super::cyclo::Cyclo;
use crate::linalg::Q;

/// `ζ_M^root · Λ^{exps/M}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitMonomial {
    pub m: u32,
    pub root: i64,
    pub exps: Vec<i64>,
}

impl UnitMonomial {
    pub fn one(m: u32, nvars: usize) -> Self {
        UnitMonomial {
            m,
            root: 0,
            exps: vec![0; nvars],
        }
    }

    pub fn new(m: u32, root: i64, exps: Vec<i64>) -> Self {
        UnitMonomial {
            m,
            root: root.mod_floor(&(m as i64)),
            exps,
        }
    }

    pub fn mul(&self, o: &UnitMonomial) -> UnitMonomial {
        UnitMonomial::new(
            self.m,
            self.root + o.root,
            self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn pow(&self, k: i64) -> UnitMonomial {
        UnitMonomial::new(
            self.m,
            self.root * k,
            self.exps.iter().map(|a| a * k).collect(),
        )
    }

    pub fn inv(&self) -> UnitMonomial {
        self.pow(-1)
    }

    /// Principal `l`-th root: root label and exponents divided by `l`, with
    /// the root label taken in `[0, M)`. `None` if `M` is too small.
    pub fn principal_root(&self, l: i64) -> Option<UnitMonomial> {
        if self.root % l != 0 || self.exps.iter().any(|e| e % l != 0) {
            return None;
        }
        Some(UnitMonomial::new(
            self.m,
            self.root / l,
            self.exps.iter().map(|e| e / l).collect(),
        ))
    }

    pub fn is_one(&self) -> bool {
        self.root == 0 && self.exps.iter().all(|&e| e == 0)
    }

    pub fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::monomial(Cyclo::root(self.m, self.root), self.exps.clone())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    m: u32,
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Cyclo>,
}

impl LaurentPoly {
    pub fn zero(m: u32, nvars: usize) -> Self {
        LaurentPoly {
            m,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Cyclo, nvars: usize) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    pub fn one(m: u32, nvars: usize) -> Self {
        Self::constant(Cyclo::one(m), nvars)
    }

    pub fn monomial(c: Cyclo, exps: Vec<i64>) -> Self {
        let mut p = LaurentPoly::zero(c.order(), exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Cyclo)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Cyclo> {
        match self.terms.len() {
            0 => Some(Cyclo::zero(self.m)),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    fn add_term(&mut self, e: Vec<i64>, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            m: self.m,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &LaurentPoly) -> LaurentPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Cyclo) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.m, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, x) in &self.terms {
            out.terms.insert(e.clone(), x.mul(c));
        }
        out
    }

    pub fn scale_q(&self, x: &Q) -> LaurentPoly {
        self.scale(&Cyclo::from_q(self.m, x.clone()))
    }

    pub fn mul_unit(&self, u: &UnitMonomial) -> LaurentPoly {
        let root = Cyclo::root(self.m, u.root);
        LaurentPoly {
            m: self.m,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let e2: Vec<i64> = e.iter().zip(&u.exps).map(|(a, b)| a + b).collect();
                    (e2, c.mul(&root))
                })
                .collect(),
        }
    }

    pub fn mul(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.m, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        (0..k).fold(LaurentPoly::one(self.m, self.nvars), |acc, _| acc.mul(self))
    }

    /// Lexicographically largest term.
    pub fn leading(&self) -> Option<(&Vec<i64>, &Cyclo)> {
        self.terms.iter().next_back()
    }

    fn min_exps(&self) -> Vec<i64> {
        (0..self.nvars)
            .map(|k| self.terms.keys().map(|e| e[k]).min().unwrap_or(0))
            .collect()
    }

    fn shifted(&self, by: &[i64]) -> LaurentPoly {
        let u = UnitMonomial::new(self.m, 0, by.iter().map(|x| -x).collect());
        self.mul_unit(&u)
    }

    /// Writes `self = u · f` with `u` a unit monomial and `f` a polynomial
    /// without monomial factor whose leading coefficient is one.
    pub fn normalize(&self) -> Option<(Cyclo, Vec<i64>, LaurentPoly)> {
        let (_, lc) = self.leading()?;
        let lc = lc.clone();
        let shift = self.min_exps();
        let f = self.shifted(&shift).scale(&lc.inv()?);
        Some((lc, shift, f))
    }

    /// Exact quotient `self / g`, or `None` if `g` does not divide `self`.
    pub fn div_exact(&self, g: &LaurentPoly) -> Option<LaurentPoly> {
        if g.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let gshift = g.min_exps();
        let gp = g.shifted(&gshift);
        let fshift = self.min_exps();
        let mut r = self.shifted(&fshift);
        let (ge, gc) = gp.leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let gcinv = gc.inv()?;
        let mut q = LaurentPoly::zero(self.m, self.nvars);
        while let Some((re, rc)) = r.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let diff: Vec<i64> = re.iter().zip(&ge).map(|(a, b)| a - b).collect();
            if diff.iter().any(|&d| d < 0) {
                return None;
            }
            let c = rc.mul(&gcinv);
            let t = LaurentPoly::monomial(c, diff);
            r = r.sub(&t.mul(&gp));
            q = q.add(&t);
        }
        let net: Vec<i64> = fshift.iter().zip(&gshift).map(|(a, b)| a - b).collect();
        Some(q.shifted(&net.iter().map(|x| -x).collect::<Vec<_>>()))
    }

    pub fn galois(&self, a: i64) -> LaurentPoly {
        LaurentPoly {
            m: self.m,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.galois(a)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// `Λ_k^{1/M} ↦ ζ_M^{step} Λ_k^{1/M}`.
    pub fn kummer(&self, k: usize, step: i64) -> LaurentPoly {
        LaurentPoly {
            m: self.m,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.mul(&Cyclo::root(self.m, step * e[k]))))
                .collect(),
        }
    }

    /// Evaluates every `Λ_k` at one, leaving an element of `ℚ(ζ_M)`.
    pub fn at_unit_weights(&self) -> Cyclo {
        self.terms
            .values()
            .fold(Cyclo::zero(self.m), |acc, c| acc.add(c))
    }

    pub fn format_with(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(k, &x)| {
                        let q = Q::new(x.into(), (self.m as i64).into());
                        let name = labels.get(k).cloned().unwrap_or_else(|| format!("x{k}"));
                        if q == Q::from_integer(1.into()) {
                            format!("e^{name}")
                        } else {
                            format!("e^({q}{name})")
                        }
                    })
                    .collect();
                let coef = format!("{c}");
                if mono.is_empty() {
                    format!("({coef})")
                } else if c.is_one() {
                    mono.join("*")
                } else {
                    format!("({coef})*{}", mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(m: u32, e: &[i64]) -> LaurentPoly {
        LaurentPoly::monomial(Cyclo::one(m), e.to_vec())
    }

    #[test]
    fn exact_division() {
        let m = 2;
        let one = LaurentPoly::one(m, 2);
        // (1 - x^2) / (1 - x) with x = Λ_1 (two units of 1/2)
        let a = one.sub(&x(m, &[4, 0]));
        let b = one.sub(&x(m, &[2, 0]));
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q, one.add(&x(m, &[2, 0])));
        assert!(b.div_exact(&a).is_none());
        // Laurent shift: (Λ^{-1} - Λ) / (1 - Λ^2) = Λ^{-1}
        let c = x(m, &[-2, 0]).sub(&x(m, &[2, 0]));
        let d = one.sub(&x(m, &[4, 0]));
        assert_eq!(c.div_exact(&d).unwrap(), x(m, &[-2, 0]));
        // fractional exponents: 1 - Λ divided by 1 - Λ^{1/2}
        let e = one.sub(&x(m, &[1, 0]));
        assert_eq!(b.div_exact(&e).unwrap(), one.add(&x(m, &[1, 0])));
    }

    #[test]
    fn normalization() {
        let m = 1;
        let p = LaurentPoly::one(m, 1).sub(&x(m, &[-1]));
        let (lc, shift, f) = p.normalize().unwrap();
        assert_eq!(lc, Cyclo::one(m));
        assert_eq!(shift, vec![-1]);
        assert_eq!(f, x(m, &[1]).sub(&LaurentPoly::one(m, 1)));
    }

    #[test]
    fn unit_roots() {
        let u = UnitMonomial::new(4, 2, vec![2, -4]);
        let r = u.principal_root(2).unwrap();
        assert_eq!(r.pow(2), u);
        assert!(UnitMonomial::new(4, 1, vec![0, 0]).principal_root(2).is_none());
    }
}
