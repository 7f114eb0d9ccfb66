//! Integer 2×2 matrices, the finite groups PSL(2, Z/NZ) and coset tables of
//! the congruence subgroups Γ(N) and Γ₀(N) inside Γ(1) = PSL(2, Z).
//!
//! Cosets are right cosets `Γ·A`. A [`CosetTable`] lists them in a fixed order
//! and records how right multiplication by the generators `Q` and `T` permutes
//! them. It also records the coset involution induced by conjugation with
//! `diag(1, -1)`, which normalizes both families of subgroups.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2Z {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2Z {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2Z {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    /// The order-two generator `Q = [[0, 1], [-1, 0]]`.
    pub fn q() -> Self {
        Self::new(0, 1, -1, 0)
    }

    /// The translation `T = [[1, 1], [0, 1]]`.
    pub fn t() -> Self {
        Self::new(1, 1, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn neg(&self) -> Self {
        Mat2Z {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Equality in PSL(2, Z), i.e. up to an overall sign.
    pub fn proj_eq(&self, other: &Mat2Z) -> bool {
        self == other || self.neg() == *other
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(), |acc, _| &acc * self)
    }
}

impl Mul for &Mat2Z {
    type Output = Mat2Z;

    fn mul(self, rhs: &Mat2Z) -> Mat2Z {
        Mat2Z {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl Mul for Mat2Z {
    type Output = Mat2Z;

    fn mul(self, rhs: Mat2Z) -> Mat2Z {
        &self * &rhs
    }
}

pub fn mat_mul(lhs: &Mat2Z, rhs: &Mat2Z) -> Mat2Z {
    lhs * rhs
}

/// An element of PSL(2, Z/NZ) in canonical form.
///
/// Of the two lifts `A` and `-A` the lexicographically smaller entry tuple is
/// kept, so the first nonzero entry lies in `1..=N/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjMat2ZN {
    entries: [u32; 4],
    level: u32,
}

impl ProjMat2ZN {
    /// Builds the canonical element from arbitrary integer entries; the
    /// determinant is not checked here.
    fn from_raw(entries: [i64; 4], level: u32) -> Self {
        let n = i64::from(level);
        let pos = entries.map(|x| x.rem_euclid(n) as u32);
        let neg = entries.map(|x| (-x).rem_euclid(n) as u32);
        ProjMat2ZN {
            entries: pos.min(neg),
            level,
        }
    }

    pub fn identity(level: u32) -> Self {
        Self::from_raw([1, 0, 0, 1], level)
    }

    pub fn entries(&self) -> [u32; 4] {
        self.entries
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn det(&self) -> u32 {
        let [a, b, c, d] = self.entries.map(u64::from);
        let n = u64::from(self.level);
        ((a * d + n * n - b * c % n) % n) as u32
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.level)
    }

    /// Conjugation by `diag(1, -1)`.
    pub fn reflect(&self) -> Self {
        let [a, b, c, d] = self.entries.map(i64::from);
        Self::from_raw([a, -b, -c, d], self.level)
    }
}

impl Mul for ProjMat2ZN {
    type Output = ProjMat2ZN;

    fn mul(self, rhs: ProjMat2ZN) -> ProjMat2ZN {
        debug_assert_eq!(self.level, rhs.level);
        let [a, b, c, d] = self.entries.map(i64::from);
        let [e, f, g, h] = rhs.entries.map(i64::from);
        Self::from_raw(
            [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
            self.level,
        )
    }
}

impl fmt::Display for ProjMat2ZN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "±[[{a},{b}],[{c},{d}]] mod {}", self.level)
    }
}

/// Reduces `A ∈ SL(2, Z)` modulo `N` and identifies `A` with `-A`.
pub fn proj_reduce(m: &Mat2Z, level: u32) -> Result<ProjMat2ZN> {
    if level < 2 {
        return Err(Error::InvalidLevel(level));
    }
    let n = BigInt::from(level);
    let red = |x: &BigInt| -> i64 {
        let r = x.mod_floor(&n);
        i64::try_from(r).expect("residue fits in i64")
    };
    Ok(ProjMat2ZN::from_raw(
        [red(&m.a), red(&m.b), red(&m.c), red(&m.d)],
        level,
    ))
}

fn generators(level: u32) -> [ProjMat2ZN; 2] {
    [
        ProjMat2ZN::from_raw([0, 1, -1, 0], level),
        ProjMat2ZN::from_raw([1, 1, 0, 1], level),
    ]
}

/// All elements of PSL(2, Z/NZ), obtained as the closure of `{Q, T}` under
/// right multiplication, in breadth-first order starting at the identity.
pub fn enumerate_psl2zn(level: u32) -> Result<Vec<ProjMat2ZN>> {
    if level < 2 {
        return Err(Error::InvalidLevel(level));
    }
    let gens = generators(level);
    let start = ProjMat2ZN::identity(level);
    let mut seen = HashMap::from([(start, 0usize)]);
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x * g;
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(y) {
                e.insert(order.len());
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Γ(N)
    #[serde(rename = "gamma", alias = "principal")]
    Principal,
    /// Γ₀(N)
    #[serde(rename = "gamma0", alias = "hecke")]
    Hecke,
}

impl Family {
    /// Short command-line name: `gamma` or `gamma0`.
    pub fn cli_name(self) -> &'static str {
        match self {
            Family::Principal => "gamma",
            Family::Hecke => "gamma0",
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "gamma" | "principal" => Ok(Family::Principal),
            "gamma0" | "hecke" => Ok(Family::Hecke),
            other => Err(format!("unknown family `{other}` (expected gamma or gamma0)")),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

/// A congruence subgroup: Γ(N) or Γ₀(N) with `N ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub level: u32,
}

impl GroupSpec {
    pub fn new(family: Family, level: u32) -> Result<Self> {
        if level < 2 {
            return Err(Error::InvalidLevel(level));
        }
        Ok(GroupSpec { family, level })
    }

    pub fn principal(level: u32) -> Result<Self> {
        Self::new(Family::Principal, level)
    }

    pub fn hecke(level: u32) -> Result<Self> {
        Self::new(Family::Hecke, level)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Principal => write!(f, "Γ({})", self.level),
            Family::Hecke => write!(f, "Γ₀({})", self.level),
        }
    }
}

/// Parses `gamma:N` / `gamma0:N`.
impl FromStr for GroupSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (fam, level) = s
            .split_once(':')
            .ok_or_else(|| format!("expected FAMILY:N, got `{s}`"))?;
        let family: Family = fam.parse()?;
        let level: u32 = level
            .parse()
            .map_err(|_| format!("invalid level `{level}`"))?;
        GroupSpec::new(family, level).map_err(|e| e.to_string())
    }
}

/// Right cosets `Γ\Γ(1)` with the right action of `Q`, `T` and the reflection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    group: GroupSpec,
    labels: Vec<ProjMat2ZN>,
    perm_q: Vec<usize>,
    perm_t: Vec<usize>,
    perm_reflect: Vec<usize>,
}

impl CosetTable {
    pub fn group(&self) -> GroupSpec {
        self.group
    }

    /// The index μ.
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[ProjMat2ZN] {
        &self.labels
    }

    /// `perm_q[i] = j` iff `Γ A_i Q = Γ A_j`.
    pub fn perm_q(&self) -> &[usize] {
        &self.perm_q
    }

    pub fn perm_t(&self) -> &[usize] {
        &self.perm_t
    }

    /// `Γ A ↦ Γ JAJ` with `J = diag(1, -1)`.
    pub fn perm_reflect(&self) -> &[usize] {
        &self.perm_reflect
    }

    /// Builds a table directly from permutations. No consistency checks are
    /// made; used to exercise the relation checks on corrupted data.
    pub fn from_parts(
        group: GroupSpec,
        labels: Vec<ProjMat2ZN>,
        perm_q: Vec<usize>,
        perm_t: Vec<usize>,
        perm_reflect: Vec<usize>,
    ) -> Self {
        CosetTable {
            group,
            labels,
            perm_q,
            perm_t,
            perm_reflect,
        }
    }

    /// Reorders the cosets: old coset `i` becomes coset `relabel[i]`.
    ///
    /// # Panics
    ///
    /// If `relabel` is not a permutation of `0..size()`.
    pub fn relabeled(&self, relabel: &[usize]) -> Self {
        let mu = self.size();
        assert_eq!(relabel.len(), mu);
        let mut check = vec![false; mu];
        for &r in relabel {
            assert!(r < mu && !check[r], "relabeling is not a permutation");
            check[r] = true;
        }
        let conj = |p: &[usize]| {
            let mut out = vec![0; mu];
            for (i, &j) in p.iter().enumerate() {
                out[relabel[i]] = relabel[j];
            }
            out
        };
        let mut labels = self.labels.clone();
        for (i, l) in self.labels.iter().enumerate() {
            labels[relabel[i]] = *l;
        }
        CosetTable {
            group: self.group,
            labels,
            perm_q: conj(&self.perm_q),
            perm_t: conj(&self.perm_t),
            perm_reflect: conj(&self.perm_reflect),
        }
    }
}

/// Elements of Θ(N) = {[[a, b], [0, a⁻¹]]} ⊂ PSL(2, Z/NZ).
fn theta_elements(level: u32) -> Vec<ProjMat2ZN> {
    let n = i64::from(level);
    let mut out: Vec<ProjMat2ZN> = (1..n)
        .filter(|a| a.gcd(&n) == 1)
        .flat_map(|a| {
            let inv = mod_inverse(a, n);
            (0..n).map(move |b| ProjMat2ZN::from_raw([a, b, 0, inv], level))
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn mod_inverse(a: i64, n: i64) -> i64 {
    let e = a.extended_gcd(&n);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(n)
}

/// Builds the coset table of `group`.
///
/// For Γ(N) the cosets are the elements of PSL(2, Z/NZ) themselves (the
/// regular representation). For Γ₀(N) each element is replaced by the
/// smallest element of its orbit under left multiplication by Θ(N).
pub fn coset_table(group: GroupSpec) -> Result<CosetTable> {
    let level = group.level;
    let elements = enumerate_psl2zn(level)?;
    let theta = match group.family {
        Family::Principal => Vec::new(),
        Family::Hecke => theta_elements(level),
    };
    let key = |x: ProjMat2ZN| -> ProjMat2ZN {
        match group.family {
            Family::Principal => x,
            Family::Hecke => theta
                .iter()
                .map(|&t| t * x)
                .min()
                .expect("Θ(N) is nonempty"),
        }
    };

    let mut index: HashMap<ProjMat2ZN, usize> = HashMap::new();
    let mut labels = Vec::new();
    for &x in &elements {
        let k = key(x);
        if let std::collections::hash_map::Entry::Vacant(e) = index.entry(k) {
            e.insert(labels.len());
            labels.push(k);
        }
    }

    let [q, t] = generators(level);
    let act = |f: &dyn Fn(ProjMat2ZN) -> ProjMat2ZN| -> Vec<usize> {
        labels.iter().map(|&l| index[&key(f(l))]).collect()
    };
    let perm_q = act(&|l| l * q);
    let perm_t = act(&|l| l * t);
    let perm_reflect = act(&|l| l.reflect());

    Ok(CosetTable {
        group,
        labels,
        perm_q,
        perm_t,
        perm_reflect,
    })
}

/// Distinct prime divisors in increasing order.
pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn totient(n: u64) -> u64 {
    prime_divisors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// Closed-form index `|Γ(1) : Γ|`.
pub fn group_index(group: GroupSpec) -> u64 {
    let n = u64::from(group.level);
    let primes = prime_divisors(n);
    match group.family {
        Family::Principal if n == 2 => 6,
        // ½ N³ ∏ (1 − 1/p²)
        Family::Principal => {
            let num: u64 = primes.iter().map(|p| p * p - 1).product();
            let den: u64 = primes.iter().map(|p| p * p).product();
            n * n * n / den * num / 2
        }
        // N ∏ (1 + 1/p)
        Family::Hecke => {
            let num: u64 = primes.iter().map(|p| p + 1).product();
            let den: u64 = primes.iter().product();
            n / den * num
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub index: u64,
    pub v2: u64,
    pub v3: u64,
    pub v_inf: u64,
    pub genus: u64,
}

/// `{-1/p}` with `{-1/2} = 0`.
fn symbol_minus_one(p: u64) -> i64 {
    match p {
        2 => 0,
        _ if p % 4 == 1 => 1,
        _ => -1,
    }
}

/// `{-3/p}` with `{-3/3} = 0`.
fn symbol_minus_three(p: u64) -> i64 {
    match p {
        3 => 0,
        _ if p % 3 == 1 => 1,
        _ => -1,
    }
}

pub fn surface_invariants(group: GroupSpec) -> Result<SurfaceInvariants> {
    let n = u64::from(group.level);
    let index = group_index(group);
    let (v2, v3, v_inf) = match group.family {
        Family::Principal => (0, 0, index / n),
        Family::Hecke => {
            let primes = prime_divisors(n);
            let v2 = if n % 4 == 0 {
                0
            } else {
                primes.iter().map(|&p| 1 + symbol_minus_one(p)).product::<i64>() as u64
            };
            let v3 = if n % 9 == 0 {
                0
            } else {
                primes.iter().map(|&p| 1 + symbol_minus_three(p)).product::<i64>() as u64
            };
            let v_inf = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| totient(d.gcd(&(n / d))))
                .sum();
            (v2, v3, v_inf)
        }
    };
    // 12 g = 12 + μ − 3 v₂ − 4 v₃ − 6 v∞
    let twelve_g = 12 + index as i64 - 3 * v2 as i64 - 4 * v3 as i64 - 6 * v_inf as i64;
    if twelve_g % 12 != 0 || twelve_g < 0 {
        return Err(Error::NonIntegralGenus { group, twelve_g });
    }
    Ok(SurfaceInvariants {
        index,
        v2,
        v3,
        v_inf,
        genus: (twelve_g / 12) as u64,
    })
}
