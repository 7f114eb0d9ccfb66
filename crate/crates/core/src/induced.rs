//! The permutation representation χ of Γ(1) on the coset set `Γ\Γ(1)`.
//!
//! `χ(G)` is the 0/1 matrix with a one at `(i, σ_G(i))`, where
//! `Γ A_i G = Γ A_{σ_G(i)}`. Acting on a column vector of coset components,
//! `(χ(G) f)_i = f_{σ_G(i)}`, and χ is multiplicative: `χ(UV) = χ(U) χ(V)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::psl2::CosetTable;

/// A permutation `p` of `0..μ` read as the matrix with ones at `(i, p[i])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermMatrix {
    perm: Vec<usize>,
}

impl PermMatrix {
    pub fn identity(size: usize) -> Self {
        PermMatrix {
            perm: (0..size).collect(),
        }
    }

    /// Returns `None` unless `perm` is a bijection of `0..perm.len()`.
    pub fn from_perm(perm: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; perm.len()];
        for &j in &perm {
            if j >= perm.len() || std::mem::replace(&mut seen[j], true) {
                return None;
            }
        }
        Some(PermMatrix { perm })
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    /// Column index of the single one in row `row`.
    pub fn image(&self, row: usize) -> usize {
        self.perm[row]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &PermMatrix) -> PermMatrix {
        assert_eq!(self.size(), rhs.size());
        PermMatrix {
            perm: self.perm.iter().map(|&k| rhs.perm[k]).collect(),
        }
    }

    pub fn inverse(&self) -> PermMatrix {
        let mut inv = vec![0; self.size()];
        for (i, &j) in self.perm.iter().enumerate() {
            inv[j] = i;
        }
        PermMatrix { perm: inv }
    }

    pub fn pow(&self, e: u32) -> PermMatrix {
        (0..e).fold(Self::identity(self.size()), |acc, _| acc.matmul(self))
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let n = self.size();
        self.perm
            .iter()
            .map(|&j| {
                let mut row = vec![0u8; n];
                row[j] = 1;
                row
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Q,
    T,
    TInv,
}

/// A word in `Q`, `T` and `T⁻¹`, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GeneratorWord(pub Vec<Generator>);

impl GeneratorWord {
    pub fn empty() -> Self {
        GeneratorWord(Vec::new())
    }

    pub fn concat(&self, other: &GeneratorWord) -> GeneratorWord {
        GeneratorWord(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Self {
        let len = rng.gen_range(0..=max_len);
        GeneratorWord(
            (0..len)
                .map(|_| match rng.gen_range(0..3) {
                    0 => Generator::Q,
                    1 => Generator::T,
                    _ => Generator::TInv,
                })
                .collect(),
        )
    }
}

/// Parses words such as `QTQ`, `QT^2`, `QT^-1`, `T`, or `I` for the empty word.
impl FromStr for GeneratorWord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut i = 0;
        while i < chars.len() {
            let g = match chars[i] {
                'Q' => Generator::Q,
                'T' => Generator::T,
                'I' => {
                    i += 1;
                    continue;
                }
                c => return Err(format!("unexpected `{c}` in word `{s}`")),
            };
            i += 1;
            let mut exp: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                let start = i + 1;
                let mut end = start;
                if end < chars.len() && chars[end] == '-' {
                    end += 1;
                }
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let digits: String = chars[start..end].iter().collect();
                exp = digits
                    .parse()
                    .map_err(|_| format!("bad exponent in word `{s}`"))?;
                i = end;
            }
            let (g, count) = match (g, exp < 0) {
                (Generator::T, true) => (Generator::TInv, exp.unsigned_abs()),
                (Generator::Q, true) => (Generator::Q, exp.unsigned_abs()),
                (g, _) => (g, exp as u64),
            };
            out.extend(std::iter::repeat(g).take(count as usize));
        }
        Ok(GeneratorWord(out))
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for g in &self.0 {
            f.write_str(match g {
                Generator::Q => "Q",
                Generator::T => "T",
                Generator::TInv => "T⁻¹",
            })?;
        }
        Ok(())
    }
}

/// Convenience for the fixed words used by the system builders.
pub(crate) fn word(s: &str) -> GeneratorWord {
    s.parse().expect("static word literal")
}

/// `χ(w)` for a word `w`.
pub fn chi_of_word(table: &CosetTable, w: &GeneratorWord) -> PermMatrix {
    let q = table.perm_q();
    let t = table.perm_t();
    let mut t_inv = vec![0; t.len()];
    for (i, &j) in t.iter().enumerate() {
        t_inv[j] = i;
    }
    let mut perm: Vec<usize> = (0..table.size()).collect();
    for g in &w.0 {
        let step: &[usize] = match g {
            Generator::Q => q,
            Generator::T => t,
            Generator::TInv => &t_inv,
        };
        for x in perm.iter_mut() {
            *x = step[*x];
        }
    }
    PermMatrix { perm }
}

/// The permutation of the coset involution `Γ A ↦ Γ JAJ`, `J = diag(1, -1)`.
pub fn reflection(table: &CosetTable) -> PermMatrix {
    PermMatrix {
        perm: table.perm_reflect().to_vec(),
    }
}

/// Checks `χ(Q)² = I`, `(χ(Q)χ(T))³ = I` and multiplicativity on 50 random
/// word pairs.
pub fn verify_relations(table: &CosetTable) -> bool {
    verify_relations_with(table, &mut rand::thread_rng())
}

pub fn verify_relations_with<R: Rng + ?Sized>(table: &CosetTable, rng: &mut R) -> bool {
    let valid = |p: &[usize]| PermMatrix::from_perm(p.to_vec()).is_some();
    if !valid(table.perm_q()) || !valid(table.perm_t()) {
        return false;
    }
    let q = chi_of_word(table, &word("Q"));
    let t = chi_of_word(table, &word("T"));
    if !q.matmul(&q).is_identity() || !q.matmul(&t).pow(3).is_identity() {
        return false;
    }
    (0..50).all(|_| {
        let u = GeneratorWord::random(rng, 12);
        let v = GeneratorWord::random(rng, 12);
        chi_of_word(table, &u.concat(&v)) == chi_of_word(table, &u).matmul(&chi_of_word(table, &v))
    })
}
