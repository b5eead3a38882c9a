//! Exact arithmetic in the cyclotomic field `ℚ(ζ_M)`.
//!
//! Elements are coefficient vectors over the power basis
//! `1, ζ, …, ζ^{φ(M)−1}`, reduced modulo the cyclotomic polynomial `Φ_M`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::linalg::Q;

/// Per-order tables: `Φ_M` and the reduced form of every power `ζ^k`,
/// `0 ≤ k < M`.
#[derive(Debug)]
pub struct CycloField {
    pub m: u32,
    pub phi: usize,
    modulus: Vec<Q>,
    powers: Vec<Vec<Q>>,
}

fn poly_divrem_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den monic; returns the quotient
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    if r.len() <= dd {
        return vec![];
    }
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            r[k + j] -= &c * d;
        }
        q[k] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    q
}

/// Integer coefficients of `Φ_m`, constant term first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); m as usize + 1];
    p[0] = -BigInt::one();
    p[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = poly_divrem_int(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn build_field(m: u32) -> CycloField {
    let modulus: Vec<Q> = cyclotomic_polynomial(m)
        .into_iter()
        .map(Q::from_integer)
        .collect();
    let phi = modulus.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![Q::zero(); phi];
    if phi > 0 {
        cur[0] = Q::one();
    }
    for _ in 0..m {
        powers.push(cur.clone());
        // multiply by ζ: shift, then reduce the ζ^φ term
        let top = cur[phi - 1].clone();
        for k in (1..phi).rev() {
            cur[k] = cur[k - 1].clone();
        }
        cur[0] = Q::zero();
        if !top.is_zero() {
            for k in 0..phi {
                cur[k] -= &top * &modulus[k];
            }
        }
    }
    CycloField {
        m,
        phi,
        modulus,
        powers,
    }
}

pub fn field(m: u32) -> Arc<CycloField> {
    assert!(m >= 1, "cyclotomic order must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic cache poisoned");
    guard
        .entry(m)
        .or_insert_with(|| Arc::new(build_field(m)))
        .clone()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    m: u32,
    c: Vec<Q>,
}

impl Cyclo {
    pub fn zero(m: u32) -> Self {
        Cyclo {
            m,
            c: vec![Q::zero(); field(m).phi],
        }
    }

    pub fn one(m: u32) -> Self {
        Self::from_q(m, Q::one())
    }

    pub fn from_q(m: u32, x: Q) -> Self {
        let mut z = Self::zero(m);
        z.c[0] = x;
        z
    }

    pub fn from_i64(m: u32, x: i64) -> Self {
        Self::from_q(m, Q::from_integer(x.into()))
    }

    /// `ζ_M^k` for any integer `k`.
    pub fn root(m: u32, k: i64) -> Self {
        let f = field(m);
        let k = k.mod_floor(&(m as i64)) as usize;
        Cyclo {
            m,
            c: f.powers[k].clone(),
        }
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn rational_part(&self) -> Q {
        self.c[0].clone()
    }

    fn check(&self, o: &Cyclo) {
        assert_eq!(self.m, o.m, "cyclotomic orders differ");
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        self.check(o);
        Cyclo {
            m: self.m,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Cyclo) -> Cyclo {
        self.check(o);
        Cyclo {
            m: self.m,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo {
            m: self.m,
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, x: &Q) -> Cyclo {
        Cyclo {
            m: self.m,
            c: self.c.iter().map(|a| a * x).collect(),
        }
    }

    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        self.check(o);
        let f = field(self.m);
        if self.is_rational() {
            return o.scale(&self.c[0]);
        }
        if o.is_rational() {
            return self.scale(&o.c[0]);
        }
        let mut out = vec![Q::zero(); f.phi];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                let k = (i + j) % self.m as usize;
                for (t, p) in f.powers[k].iter().enumerate() {
                    if !p.is_zero() {
                        out[t] += &ab * p;
                    }
                }
            }
        }
        Cyclo { m: self.m, c: out }
    }

    pub fn pow(&self, mut e: u64) -> Cyclo {
        let mut base = self.clone();
        let mut acc = Cyclo::one(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Cyclo> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(Cyclo::from_q(self.m, self.c[0].recip()));
        }
        let f = field(self.m);
        let (g, s) = ext_gcd(&trim(self.c.clone()), &f.modulus);
        debug_assert_eq!(g.len(), 1);
        let ginv = g[0].recip();
        let mut c = vec![Q::zero(); f.phi];
        for (k, x) in s.into_iter().enumerate() {
            c[k] = x * &ginv;
        }
        Some(Cyclo { m: self.m, c })
    }

    /// The automorphism `ζ ↦ ζ^a`, `gcd(a, M) = 1`.
    pub fn galois(&self, a: i64) -> Cyclo {
        let mut out = Cyclo::zero(self.m);
        for (k, x) in self.c.iter().enumerate() {
            if !x.is_zero() {
                out = out.add(&Cyclo::root(self.m, a * k as i64).scale(x));
            }
        }
        out
    }

    /// Image under `ℚ(ζ_M) ⊂ ℚ(ζ_{M'})`, `ζ_M ↦ ζ_{M'}^{M'/M}`.
    pub fn embed(&self, m2: u32) -> Cyclo {
        assert_eq!(m2 % self.m, 0, "embedding needs a multiple of the order");
        let step = (m2 / self.m) as i64;
        let mut out = Cyclo::zero(m2);
        for (k, x) in self.c.iter().enumerate() {
            if !x.is_zero() {
                out = out.add(&Cyclo::root(m2, step * k as i64).scale(x));
            }
        }
        out
    }

    /// Complex conjugation, `ζ ↦ ζ^{−1}`.
    pub fn conj(&self) -> Cyclo {
        self.galois(-1)
    }
}

fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() <= db {
        return (vec![Q::zero()], r);
    }
    let mut q = vec![Q::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, x) in b.iter().enumerate() {
            r[k + j] -= &c * x;
        }
        q[k] = c;
    }
    (trim(q), trim(r))
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let z = Q::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

/// Returns `(g, s)` with `s·a ≡ g (mod b)` and `g = gcd(a, b)`.
fn ext_gcd(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let (mut r0, mut r1) = (trim(b.to_vec()), trim(a.to_vec()));
    let (mut s0, mut s1) = (vec![Q::zero()], vec![Q::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => x.to_string(),
                _ if x.is_one() => format!("z{}^{k}", self.m),
                _ => format!("({x})*z{}^{k}", self.m),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
