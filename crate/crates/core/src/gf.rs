//! Exact arithmetic in the tower `F_q ⊂ F_{q²} ⊂ F_{q⁴}`.
//!
//! Every element of every level is stored as a single [`FElem`] code living in
//! the top field `F_{q⁴}`. The code packs two `F_{q²}` coordinates over the
//! basis `{1, σ}`, and each `F_{q²}` coordinate packs two `F_q` coordinates over
//! `{1, τ}`:
//!
//! ```text
//! code = lo | hi << 8,   lo, hi ∈ F_{q²},   F_{q²} code = a0 + q·a1
//! ```
//!
//! so an element lies in `F_{q²}` iff `hi == 0`, and in `F_q` iff additionally
//! `lo < q`. Multiplication goes through log/antilog tables of the cyclic group
//! `F_{q⁴}*`, which are shared by all three levels.
//!
//! A note on the identity `τ^{q²}`: for a primitive `τ` of `F_{q²}` the order of
//! `τ` is `q² − 1`, so `τ^{q²} = τ` (Frobenius of order two fixes `F_{q²}`).
//! The literal `τ^{q²} = 1` that sometimes appears in write-ups is false and is
//! not used anywhere here.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported `q`. With `q ≤ 16` every `F_{q²}` code fits a byte.
pub const MAX_Q: u32 = 16;

/// An element of the tower, encoded as described in the module docs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct FElem(pub u16);

impl FElem {
    pub const ZERO: FElem = FElem(0);
    pub const ONE: FElem = FElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    fn lo(self) -> usize {
        (self.0 & 0xff) as usize
    }

    #[inline]
    fn hi(self) -> usize {
        (self.0 >> 8) as usize
    }

    #[inline]
    fn from_parts(lo: usize, hi: usize) -> FElem {
        FElem((lo | (hi << 8)) as u16)
    }
}

impl fmt::Debug for FElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The three levels of the tower. The geometric extension tags (base, `⋆`,
/// `★`) are the same three levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Level {
    Base,
    Quadratic,
    Quartic,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Base, Level::Quadratic, Level::Quartic];

    /// Degree of the level over `F_q`.
    pub fn degree(self) -> u32 {
        match self {
            Level::Base => 1,
            Level::Quadratic => 2,
            Level::Quartic => 4,
        }
    }
}

/// Decomposes `n` as `p^e`, or `None` if it is not a prime power.
pub fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

/// Lookup tables and constants for one prime power `q`.
#[derive(Clone)]
pub struct FieldTower {
    q: u32,
    p: u32,
    e: u32,
    /// Coefficients (low to high, without the leading 1) of the monic
    /// irreducible polynomial defining `F_q` over `F_p`; empty when `e == 1`.
    base_modulus: Vec<u32>,
    t0: FElem,
    t1: FElem,
    s0: FElem,
    s1: FElem,
    /// `F_{q²}` addition table indexed by `a * q2 + b`.
    add2: Vec<u8>,
    neg2: Vec<u8>,
    /// `log[code]` for nonzero codes.
    log: Vec<u32>,
    /// `exp[k] = σ^k`, stored twice over so sums of two logs need no reduction.
    exp: Vec<u16>,
    /// `|F_{q⁴}*|`
    group_order: u32,
    /// Characteristic 2 only: `artin[c] = y` with `y² + y = c`, or `u16::MAX`.
    artin: Vec<u16>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("q", &self.q)
            .field("t1", &self.t1)
            .field("t0", &self.t0)
            .field("s1", &self.s1)
            .field("s0", &self.s0)
            .finish()
    }
}

/// Base-field arithmetic on codes `0..q` before the tower exists.
struct BaseField {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl BaseField {
    fn new(p: u32, e: u32, modulus: &[u32]) -> BaseField {
        let q = p.pow(e) as usize;
        let digits = |mut x: usize| -> Vec<u32> {
            (0..e)
                .map(|_| {
                    let d = (x % p as usize) as u32;
                    x /= p as usize;
                    d
                })
                .collect()
        };
        let encode = |v: &[u32]| -> usize {
            v.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize)
        };
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum) as u8;
                // schoolbook product, then reduce by the monic modulus
                let mut prod = vec![0u32; 2 * e as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for k in (e as usize..prod.len()).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    // x^e = -sum modulus[i] x^i
                    for (i, m) in modulus.iter().enumerate() {
                        let idx = k - e as usize + i;
                        prod[idx] = (prod[idx] + (p - (c * m) % p)) % p;
                    }
                }
                mul[a * q + b] = encode(&prod[..e as usize]) as u8;
            }
        }
        BaseField { q, add, mul }
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }
}

/// Least monic irreducible polynomial of degree `e` over `F_p`, coefficients
/// low to high without the leading one.
fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return Vec::new();
    }
    let count = p.pow(e);
    'cand: for code in 0..count {
        let coeffs: Vec<u32> = (0..e).map(|i| (code / p.pow(i)) % p).collect();
        if coeffs[0] == 0 {
            continue;
        }
        // degree ≤ 4, so irreducible iff no factor of degree ≤ e/2
        for d in 1..=e / 2 {
            for fcode in 0..p.pow(d) {
                let f: Vec<u32> = (0..d).map(|i| (fcode / p.pow(i)) % p).collect();
                if poly_divides_monic(p, &f, &coeffs) {
                    continue 'cand;
                }
            }
        }
        return coeffs;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Does the monic polynomial with lower coefficients `f` divide the monic one
/// with lower coefficients `g`, over `F_p`?
fn poly_divides_monic(p: u32, f: &[u32], g: &[u32]) -> bool {
    let mut r: Vec<u32> = g.to_vec();
    r.push(1);
    let df = f.len();
    let mut full_f = f.to_vec();
    full_f.push(1);
    while r.len() > df {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - df;
        if lead != 0 {
            for (i, c) in full_f.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

fn quadratic_ext_mul(base: &BaseField, t1: usize, t0: usize, a: usize, b: usize) -> usize {
    let q = base.q;
    let (a0, a1, b0, b1) = (a % q, a / q, b % q, b / q);
    let a1b1 = base.mul(a1, b1);
    let c0 = base.add(base.mul(a0, b0), base.mul(a1b1, t0));
    let c1 = base.add(base.add(base.mul(a0, b1), base.mul(a1, b0)), base.mul(a1b1, t1));
    c0 + q * c1
}

/// Multiplicative order of the class of `x` in `K[x]/(x² − s1 x − s0)`, capped
/// at `limit` (returns `None` if `x` never returns to one within the cap).
fn order_of_root(
    limit: usize,
    mul: impl Fn(usize, usize) -> usize,
    root: usize,
) -> Option<usize> {
    let mut acc = root;
    for k in 1..=limit {
        if acc == 1 {
            return Some(k);
        }
        if acc == 0 {
            return None;
        }
        acc = mul(acc, root);
    }
    None
}

impl FieldTower {
    /// Builds the tower for `q` with the default primitive polynomials.
    pub fn new(q: u32) -> Result<FieldTower> {
        FieldTower::with_override(q, None)
    }

    /// Builds the tower for `q`. `primpoly` is an optional `(t1, t0)` pair of
    /// `F_q` codes for the polynomial `x² − t1·x − t0`; without it the least
    /// primitive pair in `(t1, t0)` lexicographic order of codes is used.
    pub fn with_override(q: u32, primpoly: Option<(u32, u32)>) -> Result<FieldTower> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_Q {
            return Err(Error::FieldTooLarge(q));
        }
        let base_modulus = least_irreducible(p, e);
        let base = BaseField::new(p, e, &base_modulus);
        let qu = q as usize;
        let q2 = qu * qu;

        let is_primitive_quadratic = |t1: usize, t0: usize| -> bool {
            let mul = |a, b| quadratic_ext_mul(&base, t1, t0, a, b);
            // the root τ has code 0 + q·1
            order_of_root(q2, mul, qu) == Some(q2 - 1)
        };
        let (t1, t0) = match primpoly {
            Some((t1, t0)) => {
                let (t1, t0) = (t1 as usize, t0 as usize);
                if t1 >= qu || t0 >= qu || !is_primitive_quadratic(t1, t0) {
                    return Err(Error::NotPrimitive { q, t1: t1 as u32, t0: t0 as u32 });
                }
                (t1, t0)
            }
            None => (0..qu)
                .flat_map(|t1| (0..qu).map(move |t0| (t1, t0)))
                .find(|&(t1, t0)| is_primitive_quadratic(t1, t0))
                .expect("a primitive quadratic always exists"),
        };

        let mut add2 = vec![0u8; q2 * q2];
        let mut neg2 = vec![0u8; q2];
        let mut mul2 = vec![0u8; q2 * q2];
        for a in 0..q2 {
            for b in 0..q2 {
                let s0 = base.add(a % qu, b % qu);
                let s1 = base.add(a / qu, b / qu);
                let s = s0 + qu * s1;
                add2[a * q2 + b] = s as u8;
                if s == 0 {
                    neg2[a] = b as u8;
                }
                mul2[a * q2 + b] = quadratic_ext_mul(&base, t1, t0, a, b) as u8;
            }
        }
        let m2 = |a: usize, b: usize| mul2[a * q2 + b] as usize;
        let a2 = |a: usize, b: usize| add2[a * q2 + b] as usize;

        // F_{q⁴} = F_{q²}[σ]/(σ² − s1σ − s0), elements (u, v) ↦ u + vσ, code u + q2·v
        let mul4 = |s1: usize, s0: usize, a: usize, b: usize| -> usize {
            let (u, v, x, y) = (a % q2, a / q2, b % q2, b / q2);
            let vy = m2(v, y);
            let c0 = a2(m2(u, x), m2(vy, s0));
            let c1 = a2(a2(m2(u, y), m2(v, x)), m2(vy, s1));
            c0 + q2 * c1
        };
        let q4 = q2 * q2;
        let has_root = |s1: usize, s0: usize| {
            (0..q2).any(|x| {
                // x² − s1 x − s0 = 0  ⇔  x² = s1 x + s0
                m2(x, x) == a2(m2(s1, x), s0)
            })
        };
        let (s1, s0) = (0..q2)
            .flat_map(|s1| (0..q2).map(move |s0| (s1, s0)))
            .filter(|&(s1, s0)| s0 != 0 && !has_root(s1, s0))
            .find(|&(s1, s0)| {
                order_of_root(q4, |a, b| mul4(s1, s0, a, b), q2) == Some(q4 - 1)
            })
            .expect("a primitive quadratic over F_{q²} always exists");

        let group_order = (q4 - 1) as u32;
        let mut exp = vec![0u16; 2 * (q4 - 1)];
        let mut log = vec![0u32; 1 << 16];
        let mut acc = 1usize;
        for (k, slot) in exp.iter_mut().enumerate().take(q4 - 1) {
            let code = FElem::from_parts(acc % q2, acc / q2);
            *slot = code.0;
            log[code.0 as usize] = k as u32;
            acc = mul4(s1, s0, acc, q2);
        }
        for k in 0..q4 - 1 {
            exp[k + q4 - 1] = exp[k];
        }

        let mut tower = FieldTower {
            q,
            p,
            e,
            base_modulus,
            t0: FElem(t0 as u16),
            t1: FElem(t1 as u16),
            s0: FElem(s0 as u16),
            s1: FElem(s1 as u16),
            add2,
            neg2,
            log,
            exp,
            group_order,
            artin: Vec::new(),
        };
        if p == 2 {
            let mut artin = vec![u16::MAX; 1 << 16];
            for y in tower.elements(Level::Quartic) {
                let c = tower.add(tower.mul(y, y), y);
                if artin[c.0 as usize] == u16::MAX {
                    artin[c.0 as usize] = y.0;
                }
            }
            tower.artin = artin;
        }
        Ok(tower)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.e
    }

    pub fn base_modulus(&self) -> &[u32] {
        &self.base_modulus
    }

    /// Constants of `x² − t1·x − t0`, the minimal polynomial of `τ` over `F_q`.
    pub fn t0(&self) -> FElem {
        self.t0
    }

    pub fn t1(&self) -> FElem {
        self.t1
    }

    /// Constants of `x² − s1·x − s0`, the minimal polynomial of `σ` over `F_{q²}`.
    pub fn s0(&self) -> FElem {
        self.s0
    }

    pub fn s1(&self) -> FElem {
        self.s1
    }

    /// The primitive element `τ` of `F_{q²}`.
    pub fn tau(&self) -> FElem {
        FElem(self.q as u16)
    }

    /// The primitive element `σ` of `F_{q⁴}`.
    pub fn sigma(&self) -> FElem {
        FElem::from_parts(0, 1)
    }

    /// Number of elements of the level.
    pub fn order(&self, level: Level) -> usize {
        (self.q as usize).pow(level.degree())
    }

    #[inline]
    pub fn add(&self, a: FElem, b: FElem) -> FElem {
        let q2 = (self.q * self.q) as usize;
        let lo = self.add2[a.lo() * q2 + b.lo()] as usize;
        let hi = self.add2[a.hi() * q2 + b.hi()] as usize;
        FElem::from_parts(lo, hi)
    }

    #[inline]
    pub fn neg(&self, a: FElem) -> FElem {
        FElem::from_parts(self.neg2[a.lo()] as usize, self.neg2[a.hi()] as usize)
    }

    #[inline]
    pub fn sub(&self, a: FElem, b: FElem) -> FElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FElem, b: FElem) -> FElem {
        if a.is_zero() || b.is_zero() {
            return FElem::ZERO;
        }
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        FElem(self.exp[k as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: FElem) -> Option<FElem> {
        if a.is_zero() {
            return None;
        }
        let k = (self.group_order - self.log[a.0 as usize]) % self.group_order;
        Some(FElem(self.exp[k as usize]))
    }

    /// `a / b`.
    ///
    /// # Panics
    /// If `b` is zero.
    #[inline]
    pub fn div(&self, a: FElem, b: FElem) -> FElem {
        self.mul(a, self.inv(b).expect("division by zero"))
    }

    pub fn pow(&self, a: FElem, k: u64) -> FElem {
        if k == 0 {
            return FElem::ONE;
        }
        if a.is_zero() {
            return FElem::ZERO;
        }
        let n = self.group_order as u64;
        let e = (self.log[a.0 as usize] as u64 * (k % n)) % n;
        FElem(self.exp[e as usize])
    }

    /// `x^{q^power}`.
    pub fn frobenius(&self, x: FElem, power: u32) -> FElem {
        if x.is_zero() {
            return x;
        }
        let n = self.group_order as u64;
        let qk = (0..power % 4).fold(1u64, |acc, _| acc * self.q as u64 % n);
        let e = self.log[x.0 as usize] as u64 * qk % n;
        FElem(self.exp[e as usize])
    }

    /// The image of the integer `n` in the prime field.
    pub fn from_int(&self, n: i64) -> FElem {
        FElem(n.rem_euclid(self.p as i64) as u16)
    }

    /// Builds the element `x0 + x1·τ` from two `F_q` codes.
    pub fn from_base_pair(&self, x0: FElem, x1: FElem) -> FElem {
        debug_assert!(self.in_level(x0, Level::Base) && self.in_level(x1, Level::Base));
        FElem(x0.0 + self.q as u16 * x1.0)
    }

    /// Splits `x ∈ F_{q²}` as `x0 + x1·τ` with `x0, x1 ∈ F_q`.
    pub fn base_pair(&self, x: FElem) -> Option<(FElem, FElem)> {
        if x.hi() != 0 {
            return None;
        }
        let q = self.q as usize;
        Some((FElem((x.lo() % q) as u16), FElem((x.lo() / q) as u16)))
    }

    /// Builds `u + v·σ` from two `F_{q²}` codes.
    pub fn from_quadratic_pair(&self, u: FElem, v: FElem) -> FElem {
        debug_assert!(u.hi() == 0 && v.hi() == 0);
        FElem::from_parts(u.lo(), v.lo())
    }

    /// Splits `x ∈ F_{q⁴}` as `u + v·σ` with `u, v ∈ F_{q²}`.
    pub fn quadratic_pair(&self, x: FElem) -> (FElem, FElem) {
        (FElem(x.lo() as u16), FElem(x.hi() as u16))
    }

    #[inline]
    pub fn in_level(&self, x: FElem, level: Level) -> bool {
        match level {
            Level::Base => x.hi() == 0 && x.lo() < self.q as usize,
            Level::Quadratic => x.hi() == 0,
            Level::Quartic => true,
        }
    }

    /// The smallest level containing `x`.
    pub fn level_of(&self, x: FElem) -> Level {
        if self.in_level(x, Level::Base) {
            Level::Base
        } else if self.in_level(x, Level::Quadratic) {
            Level::Quadratic
        } else {
            Level::Quartic
        }
    }

    /// All elements of a level in the canonical order (ascending `(hi, lo)`).
    pub fn elements(&self, level: Level) -> impl Iterator<Item = FElem> + Clone {
        let q = self.q as usize;
        let q2 = q * q;
        let (lo_n, hi_n) = match level {
            Level::Base => (q, 1),
            Level::Quadratic => (q2, 1),
            Level::Quartic => (q2, q2),
        };
        (0..hi_n).flat_map(move |hi| (0..lo_n).map(move |lo| FElem::from_parts(lo, hi)))
    }

    /// Nonzero elements of a level, canonical order.
    pub fn nonzero(&self, level: Level) -> impl Iterator<Item = FElem> + Clone {
        self.elements(level).filter(|x| !x.is_zero())
    }

    /// The `index`-th element of a level in canonical order.
    pub fn element_at(&self, level: Level, index: usize) -> FElem {
        let q2 = (self.q * self.q) as usize;
        match level {
            Level::Base | Level::Quadratic => FElem(index as u16),
            Level::Quartic => FElem::from_parts(index % q2, index / q2),
        }
    }

    /// Position of `x` in the canonical order of `level`.
    pub fn index_of(&self, x: FElem) -> usize {
        let q2 = (self.q * self.q) as usize;
        x.lo() + q2 * x.hi()
    }

    /// Discrete log to base `σ`; `None` for zero.
    pub fn log(&self, x: FElem) -> Option<u32> {
        (!x.is_zero()).then(|| self.log[x.0 as usize])
    }

    /// A square root in `F_{q⁴}`, if one exists there.
    pub fn sqrt(&self, x: FElem) -> Option<FElem> {
        if x.is_zero() {
            return Some(x);
        }
        let l = self.log[x.0 as usize];
        if self.p == 2 {
            // group order is odd; halve the log modulo it
            let n = self.group_order;
            let half = (l as u64 * (n as u64).div_ceil(2)) % n as u64;
            return Some(FElem(self.exp[half as usize]));
        }
        l.is_multiple_of(2).then(|| FElem(self.exp[(l / 2) as usize]))
    }

    /// Roots in `level ∪ {∞}` of the binary quadratic `a·s² + b·s·t + c·t²`,
    /// as affine values `s/t` (`None` standing for `t = 0`), with multiplicity.
    /// Returns `None` when the form vanishes identically.
    pub fn binary_quadratic_roots(
        &self,
        a: FElem,
        b: FElem,
        c: FElem,
        level: Level,
    ) -> Option<Vec<Option<FElem>>> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(2);
        if a.is_zero() {
            // t·(b s + c t): ∞ is a root, the other is s/t = −c/b
            if b.is_zero() {
                out.push(None);
                out.push(None);
            } else {
                out.push(None);
                let r = self.neg(self.div(c, b));
                if self.in_level(r, level) {
                    out.push(Some(r));
                }
            }
            return Some(out);
        }
        let bb = self.div(b, a);
        let cc = self.div(c, a);
        // x² + bb x + cc = 0
        let found: Vec<FElem> = if self.p == 2 {
            if bb.is_zero() {
                let r = self.sqrt(cc).expect("char 2 squares are onto");
                vec![r, r]
            } else {
                // x = bb·y, y² + y = cc / bb²
                let rhs = self.div(cc, self.mul(bb, bb));
                match self.artin[rhs.0 as usize] {
                    u16::MAX => vec![],
                    y => {
                        let y = FElem(y);
                        vec![self.mul(bb, y), self.mul(bb, self.add(y, FElem::ONE))]
                    }
                }
            }
        } else {
            let two = self.from_int(2);
            let four = self.from_int(4);
            let disc = self.sub(self.mul(bb, bb), self.mul(four, cc));
            match self.sqrt(disc) {
                None => vec![],
                Some(r) => {
                    let half = self.inv(two).unwrap();
                    let nb = self.neg(bb);
                    vec![self.mul(half, self.add(nb, r)), self.mul(half, self.sub(nb, r))]
                }
            }
        };
        out.extend(found.into_iter().filter(|&r| self.in_level(r, level)).map(Some));
        Some(out)
    }
}

/// A root reported by [`FieldTower::roots`] with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Root {
    /// `None` is the point at infinity (projective semantics only).
    pub value: Option<FElem>,
    pub multiplicity: usize,
}

impl FieldTower {
    /// Evaluates a polynomial given low-to-high coefficients.
    pub fn eval_poly(&self, coeffs: &[FElem], x: FElem) -> FElem {
        coeffs.iter().rev().fold(FElem::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Synthetic division by `(x − r)`, returning the quotient. The remainder
    /// is discarded; callers divide only at roots.
    fn deflate(&self, coeffs: &[FElem], r: FElem) -> Vec<FElem> {
        let n = coeffs.len();
        let mut out = vec![FElem::ZERO; n - 1];
        let mut acc = FElem::ZERO;
        for i in (1..n).rev() {
            acc = self.add(self.mul(acc, r), coeffs[i]);
            out[i - 1] = acc;
        }
        out
    }

    /// Every root of `coeffs` in `search`, found by exhaustive scan, with
    /// multiplicity from repeated synthetic division.
    pub fn roots(&self, coeffs: &[FElem], search: Level) -> Result<Vec<Root>> {
        let mut poly = trim(coeffs);
        if poly.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        if poly.len() > 9 {
            return Err(Error::DegreeTooHigh(poly.len() - 1));
        }
        let mut roots = Vec::new();
        for x in self.elements(search) {
            if poly.len() <= 1 {
                break;
            }
            let mut mult = 0;
            while poly.len() > 1 && self.eval_poly(&poly, x).is_zero() {
                poly = self.deflate(&poly, x);
                mult += 1;
            }
            if mult > 0 {
                roots.push(Root { value: Some(x), multiplicity: mult });
            }
        }
        Ok(roots)
    }

    /// Roots of the homogenised polynomial of formal degree `degree`: the
    /// affine roots in `search`, plus `∞` with multiplicity
    /// `degree − deg(poly)` when that is positive.
    pub fn projective_roots(&self, coeffs: &[FElem], degree: usize, search: Level) -> Result<Vec<Root>> {
        let poly = trim(coeffs);
        if poly.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let actual = poly.len() - 1;
        if actual > degree {
            return Err(Error::DegreeTooHigh(actual));
        }
        let mut roots = self.roots(&poly, search)?;
        if degree > actual {
            roots.push(Root { value: None, multiplicity: degree - actual });
        }
        Ok(roots)
    }

    /// Product of two polynomials (low-to-high coefficients).
    pub fn poly_mul(&self, a: &[FElem], b: &[FElem]) -> Vec<FElem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![FElem::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        out
    }

    pub fn poly_add(&self, a: &[FElem], b: &[FElem]) -> Vec<FElem> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(FElem::ZERO);
                let y = b.get(i).copied().unwrap_or(FElem::ZERO);
                self.add(x, y)
            })
            .collect()
    }

    pub fn poly_scale(&self, a: &[FElem], c: FElem) -> Vec<FElem> {
        a.iter().map(|&x| self.mul(x, c)).collect()
    }
}

impl FieldTower {
    /// Quotient and remainder of `a` by a nonzero `b`.
    pub fn poly_divrem(&self, a: &[FElem], b: &[FElem]) -> (Vec<FElem>, Vec<FElem>) {
        let b = trim(b);
        assert!(!b.is_empty(), "division by the zero polynomial");
        let mut r = trim(a);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead_inv = self.inv(*b.last().unwrap()).unwrap();
        let mut quot = vec![FElem::ZERO; r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul(*r.last().unwrap(), lead_inv);
            quot[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = self.sub(r[shift + i], self.mul(c, bi));
            }
            r = trim(&r);
        }
        (quot, r)
    }

    /// Monic greatest common divisor; empty when both inputs are zero.
    pub fn poly_gcd(&self, a: &[FElem], b: &[FElem]) -> Vec<FElem> {
        let (mut x, mut y) = (trim(a), trim(b));
        while !y.is_empty() {
            let (_, r) = self.poly_divrem(&x, &y);
            x = y;
            y = r;
        }
        match x.last() {
            Some(&lead) => self.poly_scale(&x, self.inv(lead).unwrap()),
            None => x,
        }
    }

    /// Coordinates of `x` over `F_q` in the basis `1, τ, σ, τσ`.
    pub fn base_coordinates(&self, x: FElem) -> [FElem; 4] {
        let (u, v) = self.quadratic_pair(x);
        let (u0, u1) = self.base_pair(u).unwrap();
        let (v0, v1) = self.base_pair(v).unwrap();
        [u0, u1, v0, v1]
    }

    /// Inverse of [`FieldTower::base_coordinates`].
    pub fn from_base_coordinates(&self, c: [FElem; 4]) -> FElem {
        self.from_quadratic_pair(self.from_base_pair(c[0], c[1]), self.from_base_pair(c[2], c[3]))
    }
}

/// Drops trailing zero coefficients.
pub fn trim(coeffs: &[FElem]) -> Vec<FElem> {
    let n = coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
    coeffs[..n].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(11), Some((11, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn q2_uses_the_only_irreducible_quadratic() {
        let f = FieldTower::new(2).unwrap();
        assert_eq!((f.t1(), f.t0()), (FElem::ONE, FElem::ONE));
    }

    #[test]
    fn rejects_bad_q() {
        assert!(matches!(FieldTower::new(6), Err(Error::NotPrimePower(6))));
        assert!(matches!(FieldTower::new(25), Err(Error::FieldTooLarge(25))));
    }

    #[test]
    fn tau_identities() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = FieldTower::new(q).unwrap();
            let tau = f.tau();
            let tq = f.frobenius(tau, 1);
            assert_eq!(f.mul(tau, tq), f.neg(f.t0()), "q={q}");
            assert_eq!(f.add(tau, tq), f.t1(), "q={q}");
            assert_eq!(tq, f.sub(f.t1(), tau), "q={q}");
            assert_eq!(f.frobenius(tau, 2), tau, "q={q}");
            assert_ne!(f.pow(tau, (q * q) as u64), FElem::ONE, "q={q}");
        }
    }

    #[test]
    fn frobenius_fixes_subfields() {
        let f = FieldTower::new(4).unwrap();
        for x in f.elements(Level::Base) {
            assert_eq!(f.frobenius(x, 1), x);
        }
        for x in f.elements(Level::Quadratic) {
            assert_eq!(f.frobenius(x, 2), x);
        }
        for x in f.elements(Level::Quartic) {
            assert_eq!(f.frobenius(x, 4), x);
            assert_eq!(f.frobenius(x, 1), f.pow(x, 4));
        }
    }

    #[test]
    fn embedding_round_trip() {
        let f = FieldTower::new(5).unwrap();
        for x in f.elements(Level::Quadratic) {
            let (a, b) = f.base_pair(x).unwrap();
            assert_eq!(f.from_base_pair(a, b), x);
            let (u, v) = f.quadratic_pair(x);
            assert_eq!(v, FElem::ZERO);
            assert_eq!(f.from_quadratic_pair(u, v), x);
        }
        // x0 + x1 τ agrees with field arithmetic
        let t = f.tau();
        for x0 in f.elements(Level::Base) {
            for x1 in f.elements(Level::Base) {
                assert_eq!(f.from_base_pair(x0, x1), f.add(x0, f.mul(x1, t)));
            }
        }
        let s = f.sigma();
        let (u, v) = (f.tau(), f.from_int(3));
        assert_eq!(f.from_quadratic_pair(u, v), f.add(u, f.mul(v, s)));
    }

    #[test]
    fn sigma_minimal_polynomial() {
        let f = FieldTower::new(3).unwrap();
        let s = f.sigma();
        let lhs = f.mul(s, s);
        let rhs = f.add(f.mul(f.s1(), s), f.s0());
        assert_eq!(lhs, rhs);
        assert!(f.in_level(f.s1(), Level::Quadratic));
        assert!(f.in_level(f.s0(), Level::Quadratic));
    }

    #[test]
    fn override_is_checked() {
        // over F_7: x² − x − 3 has discriminant 1 + 12 = 13 ≡ 6, a non-square,
        // so it is irreducible; primitivity is decided by the order of its root
        let res = FieldTower::with_override(7, Some((1, 3)));
        let oracle = brute_force_primitive(7, 1, 3);
        assert_eq!(res.is_ok(), oracle);
        // x² − 1 is reducible
        assert!(FieldTower::with_override(7, Some((0, 1))).is_err());
    }

    /// Order of x in F_p[x]/(x² − t1 x − t0) by brute force on integer pairs.
    fn brute_force_primitive(p: u32, t1: u32, t0: u32) -> bool {
        let mul = |a: (u32, u32), b: (u32, u32)| {
            let c = a.1 * b.1 % p;
            ((a.0 * b.0 + c * t0) % p, (a.0 * b.1 + a.1 * b.0 + c * t1) % p)
        };
        let mut acc = (0, 1);
        for k in 1..p * p {
            if acc == (1, 0) {
                return k == p * p - 1;
            }
            acc = mul(acc, (0, 1));
        }
        acc == (1, 0)
    }

    #[test]
    fn q3_every_primitive_quadratic_satisfies_the_tau_identities() {
        for t1 in 0..3 {
            for t0 in 0..3 {
                let ok = brute_force_primitive(3, t1, t0);
                let tower = FieldTower::with_override(3, Some((t1, t0)));
                assert_eq!(ok, tower.is_ok());
                if let Ok(f) = tower {
                    let tau = f.tau();
                    let tq = f.frobenius(tau, 1);
                    assert_eq!(f.mul(tau, tq), f.neg(f.t0()));
                    assert_eq!(f.add(tau, tq), f.t1());
                }
            }
        }
    }

    #[test]
    fn roots_of_x2_minus_1() {
        let f = FieldTower::new(5).unwrap();
        let poly = [f.neg(FElem::ONE), FElem::ZERO, FElem::ONE];
        let r = f.roots(&poly, Level::Base).unwrap();
        let vals: Vec<_> = r.iter().map(|r| r.value.unwrap()).collect();
        assert_eq!(vals, vec![FElem::ONE, f.from_int(4)]);
    }

    #[test]
    fn roots_of_the_minimal_polynomial_are_tau_and_its_conjugate() {
        let f = FieldTower::new(7).unwrap();
        let poly = [f.neg(f.t0()), f.neg(f.t1()), FElem::ONE];
        assert!(f.roots(&poly, Level::Base).unwrap().is_empty());
        let mut got: Vec<_> = f
            .roots(&poly, Level::Quadratic)
            .unwrap()
            .into_iter()
            .map(|r| r.value.unwrap())
            .collect();
        let mut want = vec![f.tau(), f.frobenius(f.tau(), 1)];
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn multiplicities_and_infinity() {
        let f = FieldTower::new(3).unwrap();
        // (x − 1)² x
        let one = FElem::ONE;
        let p = f.poly_mul(&f.poly_mul(&[f.neg(one), one], &[f.neg(one), one]), &[FElem::ZERO, one]);
        let r = f.projective_roots(&p, 5, Level::Base).unwrap();
        assert_eq!(
            r,
            vec![
                Root { value: Some(FElem::ZERO), multiplicity: 1 },
                Root { value: Some(one), multiplicity: 2 },
                Root { value: None, multiplicity: 2 },
            ]
        );
        assert!(matches!(f.roots(&[FElem::ZERO], Level::Base), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn binary_quadratic_solver_matches_scan() {
        for q in [3, 4, 5, 8] {
            let f = FieldTower::new(q).unwrap();
            let els: Vec<_> = f.elements(Level::Quadratic).step_by(3).collect();
            for &a in els.iter().take(6) {
                for &b in els.iter().take(6) {
                    for &c in els.iter().take(6) {
                        for level in [Level::Quadratic, Level::Quartic] {
                            let Some(mut got) = f.binary_quadratic_roots(a, b, c, level) else {
                                assert!(a.is_zero() && b.is_zero() && c.is_zero());
                                continue;
                            };
                            let mut want = Vec::new();
                            if a.is_zero() {
                                want.push(None);
                                if b.is_zero() {
                                    want.push(None);
                                }
                            }
                            for r in f.roots(&[c, b, a], level).unwrap_or_default() {
                                for _ in 0..r.multiplicity {
                                    want.push(r.value);
                                }
                            }
                            got.sort();
                            want.sort();
                            assert_eq!(got, want, "q={q} a={a:?} b={b:?} c={c:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gcd_and_division() {
        let f = FieldTower::new(5).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>();
        // (x−1)(x−2) and (x−1)(x+1)
        let a = f.poly_mul(&e(&[4, 1]), &e(&[3, 1]));
        let b = f.poly_mul(&e(&[4, 1]), &e(&[1, 1]));
        assert_eq!(f.poly_gcd(&a, &b), e(&[4, 1]));
        let (quot, rem) = f.poly_divrem(&a, &e(&[3, 1]));
        assert_eq!(quot, e(&[4, 1]));
        assert!(rem.is_empty());
    }

    #[test]
    fn base_coordinates_round_trip() {
        let f = FieldTower::new(3).unwrap();
        for x in f.elements(Level::Quartic) {
            assert_eq!(f.from_base_coordinates(f.base_coordinates(x)), x);
        }
    }
}
