//! Functional-equation systems for polynomial eigenfunctions of the transfer
//! operator at `s = −n/2`, assembled as homogeneous integer linear systems.
//!
//! Unknowns are laid out component-major: ε block (when present), then coset,
//! then ascending monomial degree. Equations follow the same order. At
//! `s = −n/2` the weight factor `(1/(z+1))^{2s}` is `(z+1)ⁿ`, so every term is
//! a substitution operator compiled by [`compile_slash`].
//!
//! The eigenfunction equation, for `ε = ±1`, reads
//!
//! ```text
//! λ (f(z, ε) − χ(QT^ε Q) f(z+1, ε)) = (z+1)ⁿ χ(QT^ε) f(1/(z+1), −ε).
//! ```
//!
//! [`SystemKind::Extended`] is the definitive system for `dim ℘ₙ^λ`: the
//! unknown is `p ∈ P_n^μ`, the `ε = −1` component is the reflected copy
//! `f(z, −1) = R p(z)` where `R` permutes cosets by `ΓA ↦ Γ JAJ`,
//! `J = diag(1, −1)`, and both ε-equations are imposed.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::eichler::dim_eichler;
use crate::error::{Error, Result};
use crate::induced::{chi_of_word, reflection, word, PermMatrix};
use crate::linalg::{self, nullspace_basis, IntMatrix, RankMethod, RankResult, RankStrategy};
use crate::poly::{compile_slash, multiply_map, shift_map, LinMap, PolyVec};
use crate::psl2::{coset_table, CosetTable, GroupSpec, Mat2Z};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Extended,
    Reduced,
    Full,
    Master,
    Gamma2Pair,
    Gamma02Tilde,
    Upsilon,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Extended => "extended",
            SystemKind::Reduced => "reduced",
            SystemKind::Full => "full",
            SystemKind::Master => "master",
            SystemKind::Gamma2Pair => "gamma2_pair",
            SystemKind::Gamma02Tilde => "gamma02_tilde",
            SystemKind::Upsilon => "upsilon",
        }
    }

    /// Kinds whose nullspace depends on the coset table of a group.
    pub fn uses_group(self) -> bool {
        matches!(
            self,
            SystemKind::Extended | SystemKind::Reduced | SystemKind::Full | SystemKind::Master
        )
    }

    pub fn uses_lambda(self) -> bool {
        !matches!(self, SystemKind::Master | SystemKind::Upsilon)
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [
            SystemKind::Extended,
            SystemKind::Reduced,
            SystemKind::Full,
            SystemKind::Master,
            SystemKind::Gamma2Pair,
            SystemKind::Gamma02Tilde,
            SystemKind::Upsilon,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| format!("unknown system `{s}`"))
    }
}

/// The eigenvalue λ = ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lambda {
    Plus,
    Minus,
}

impl Lambda {
    pub const BOTH: [Lambda; 2] = [Lambda::Plus, Lambda::Minus];

    pub fn sign(self) -> i64 {
        match self {
            Lambda::Plus => 1,
            Lambda::Minus => -1,
        }
    }

    pub fn flip(self) -> Lambda {
        match self {
            Lambda::Plus => Lambda::Minus,
            Lambda::Minus => Lambda::Plus,
        }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lambda::Plus => "plus",
            Lambda::Minus => "minus",
        })
    }
}

/// Shape of the unknown vector: `components` polynomials of `poly_len`
/// coefficients each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknownLayout {
    pub components: usize,
    pub poly_len: usize,
}

impl UnknownLayout {
    pub fn len(&self) -> usize {
        self.components * self.poly_len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cuts a solution vector into its polynomial components.
    pub fn split(&self, v: &[BigRational]) -> Vec<PolyVec> {
        assert_eq!(v.len(), self.len());
        v.chunks(self.poly_len).map(|c| PolyVec::new(c.to_vec())).collect()
    }
}

#[derive(Clone, Debug)]
pub struct LewisSystem {
    pub kind: SystemKind,
    /// The group whose cosets index the components; Γ(2) or Γ₀(2) for the
    /// fixed pair/tilde systems, none for Υ.
    pub group: Option<GroupSpec>,
    pub n: u32,
    pub lambda: Option<Lambda>,
    pub matrix: IntMatrix,
    pub layout: UnknownLayout,
}

impl LewisSystem {
    pub fn rank(&self, strategy: RankStrategy) -> RankResult {
        linalg::rank(&self.matrix, strategy)
    }

    /// Nullspace dimension: columns minus rank.
    pub fn dim(&self, strategy: RankStrategy) -> usize {
        self.matrix.cols() - self.rank(strategy).rank
    }

    /// Exact nullspace basis, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        nullspace_basis(&self.matrix)
    }

    /// Rewrites every polynomial unknown as `f(z) = φ(z + 1)`; the nullspace
    /// dimension is unchanged.
    pub fn with_shifted_unknowns(&self) -> LewisSystem {
        let s = shift_map(self.layout.poly_len - 1, 1);
        let block = self.layout.poly_len;
        let cols = self.matrix.cols();
        let mut out = IntMatrix::zeros(self.matrix.rows(), cols);
        for r in 0..self.matrix.rows() {
            let mut acc = vec![BigInt::zero(); cols];
            for (c, x) in self.matrix.row(r) {
                // row vector times block-diagonal S: entry (c) spreads over
                // the same block through row (c mod block) of S
                let base = c - c % block;
                let k = c % block;
                for j in 0..block {
                    let sv = s.get(k, j);
                    if !sv.is_zero() {
                        acc[base + j] += x * sv;
                    }
                }
            }
            for (c, v) in acc.into_iter().enumerate() {
                if !v.is_zero() {
                    out.set(r, c, v);
                }
            }
        }
        LewisSystem {
            matrix: out,
            ..self.clone()
        }
    }
}

fn check_degree(n: u32) -> Result<()> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidDegree(n));
    }
    Ok(())
}

/// Writes `coeff · (P ⊗ M)` into the block grid of an [`IntMatrix`].
struct Assembler {
    matrix: IntMatrix,
    row_block: usize,
    col_block: usize,
}

impl Assembler {
    fn new(row_blocks: usize, row_block: usize, col_blocks: usize, col_block: usize) -> Self {
        Assembler {
            matrix: IntMatrix::zeros(row_blocks * row_block, col_blocks * col_block),
            row_block,
            col_block,
        }
    }

    fn add_block(&mut self, row_comp: usize, col_comp: usize, map: &LinMap, coeff: i64) {
        assert_eq!((map.rows(), map.cols()), (self.row_block, self.col_block));
        let coeff = BigInt::from(coeff);
        for i in 0..map.rows() {
            for j in 0..map.cols() {
                let v = map.get(i, j);
                if !v.is_zero() {
                    self.matrix.add_to(
                        row_comp * self.row_block + i,
                        col_comp * self.col_block + j,
                        &(v * &coeff),
                    );
                }
            }
        }
    }

    /// `coeff · (P ⊗ M)` with `P` placed at block offsets.
    fn add_kron(&mut self, row_off: usize, col_off: usize, perm: &PermMatrix, map: &LinMap, coeff: i64) {
        for i in 0..perm.size() {
            self.add_block(row_off + i, col_off + perm.image(i), map, coeff);
        }
    }

    fn finish(self) -> IntMatrix {
        self.matrix
    }
}

fn slash(a: i64, b: i64, c: i64, d: i64, n: usize) -> LinMap {
    compile_slash(&Mat2Z::new(a, b, c, d), n).expect("nonsingular literal matrix")
}

/// `φ ↦ (z+1)ⁿ φ(1/(z+1))`
fn inversion_term(n: usize) -> LinMap {
    slash(0, 1, 1, 1, n)
}

fn chi(table: &CosetTable, w: &str) -> PermMatrix {
    chi_of_word(table, &word(w))
}

/// Both ε-equations on independent unknowns `(f(·, +1), f(·, −1))`.
pub fn build_full_system(table: &CosetTable, n: u32, lambda: Lambda) -> Result<LewisSystem> {
    check_degree(n)?;
    let deg = n as usize;
    let mu = table.size();
    let l = lambda.sign();
    let (id, s, r) = (LinMap::identity(deg), shift_map(deg, 1), inversion_term(deg));
    let ident = PermMatrix::identity(mu);
    let mut asm = Assembler::new(2 * mu, deg + 1, 2 * mu, deg + 1);
    // ε = +1: rows 0..μ; ε = −1: rows μ..2μ
    for (row_off, same, other, shift_word, inv_word) in
        [(0, 0, mu, "QTQ", "QT"), (mu, mu, 0, "QT^-1Q", "QT^-1")]
    {
        asm.add_kron(row_off, same, &ident, &id, l);
        asm.add_kron(row_off, same, &chi(table, shift_word), &s, -l);
        asm.add_kron(row_off, other, &chi(table, inv_word), &r, -1);
    }
    Ok(LewisSystem {
        kind: SystemKind::Full,
        group: Some(table.group()),
        n,
        lambda: Some(lambda),
        matrix: asm.finish(),
        layout: UnknownLayout {
            components: 2 * mu,
            poly_len: deg + 1,
        },
    })
}

/// Both ε-equations with `f(·, +1) = p` and `f(·, −1) = R p`, `R` the coset
/// reflection.
pub fn build_extended_system(table: &CosetTable, n: u32, lambda: Lambda) -> Result<LewisSystem> {
    check_degree(n)?;
    let deg = n as usize;
    let mu = table.size();
    let l = lambda.sign();
    let (id, s, r) = (LinMap::identity(deg), shift_map(deg, 1), inversion_term(deg));
    let refl = reflection(table);
    let ident = PermMatrix::identity(mu);
    let mut asm = Assembler::new(2 * mu, deg + 1, mu, deg + 1);
    // ε = +1: λ(p − χ(QTQ) S p) − χ(QT) R_inv (refl p) = 0
    asm.add_kron(0, 0, &ident, &id, l);
    asm.add_kron(0, 0, &chi(table, "QTQ"), &s, -l);
    asm.add_kron(0, 0, &chi(table, "QT").matmul(&refl), &r, -1);
    // ε = −1: λ(refl p − χ(QT⁻¹Q) S refl p) − χ(QT⁻¹) R_inv p = 0
    asm.add_kron(mu, 0, &refl, &id, l);
    asm.add_kron(mu, 0, &chi(table, "QT^-1Q").matmul(&refl), &s, -l);
    asm.add_kron(mu, 0, &chi(table, "QT^-1"), &r, -1);
    Ok(LewisSystem {
        kind: SystemKind::Extended,
        group: Some(table.group()),
        n,
        lambda: Some(lambda),
        matrix: asm.finish(),
        layout: UnknownLayout {
            components: mu,
            poly_len: deg + 1,
        },
    })
}

fn require_t_squared_trivial(table: &CosetTable, system: &'static str) -> Result<()> {
    if chi(table, "T^2").is_identity() {
        Ok(())
    } else {
        Err(Error::UnsupportedGroup {
            system,
            group: table.group(),
            reason: "χ(T²) is not the identity",
        })
    }
}

/// The single equation `λ(f − χ(QTQ) f(z+1)) = (z+1)ⁿ χ(QT) f(1/(z+1))`,
/// valid when `χ(T²) = I`.
pub fn build_reduced_system(table: &CosetTable, n: u32, lambda: Lambda) -> Result<LewisSystem> {
    check_degree(n)?;
    require_t_squared_trivial(table, "reduced")?;
    let deg = n as usize;
    let mu = table.size();
    let l = lambda.sign();
    let mut asm = Assembler::new(mu, deg + 1, mu, deg + 1);
    asm.add_kron(0, 0, &PermMatrix::identity(mu), &LinMap::identity(deg), l);
    asm.add_kron(0, 0, &chi(table, "QTQ"), &shift_map(deg, 1), -l);
    asm.add_kron(0, 0, &chi(table, "QT"), &inversion_term(deg), -1);
    Ok(LewisSystem {
        kind: SystemKind::Reduced,
        group: Some(table.group()),
        n,
        lambda: Some(lambda),
        matrix: asm.finish(),
        layout: UnknownLayout {
            components: mu,
            poly_len: deg + 1,
        },
    })
}

/// `g(z) − χ(QTQ) g(z+1) = (z+2)ⁿ χ(QT²) g(−1/(z+2))`.
pub fn build_master_system(table: &CosetTable, n: u32) -> Result<LewisSystem> {
    check_degree(n)?;
    let deg = n as usize;
    let mu = table.size();
    let mut asm = Assembler::new(mu, deg + 1, mu, deg + 1);
    asm.add_kron(0, 0, &PermMatrix::identity(mu), &LinMap::identity(deg), 1);
    asm.add_kron(0, 0, &chi(table, "QTQ"), &shift_map(deg, 1), -1);
    asm.add_kron(0, 0, &chi(table, "QT^2"), &master_term(deg), -1);
    Ok(LewisSystem {
        kind: SystemKind::Master,
        group: Some(table.group()),
        n,
        lambda: None,
        matrix: asm.finish(),
        layout: UnknownLayout {
            components: mu,
            poly_len: deg + 1,
        },
    })
}

/// `φ ↦ (z+2)ⁿ φ(−1/(z+2))`
pub fn master_term(n: usize) -> LinMap {
    slash(0, -1, 1, 2, n)
}

fn level_two_table(group: GroupSpec, system: &'static str) -> Result<CosetTable> {
    let table = coset_table(group)?;
    require_t_squared_trivial(&table, system)?;
    Ok(table)
}

/// `T̄φ(z) = φ(z−1) − φ(z+1)` on `P_n`.
pub fn tbar_map(n: usize) -> LinMap {
    &shift_map(n, -1) - &shift_map(n, 1)
}

/// `Gφ(z) = zⁿ(λφ((z+1)/z) + φ((z−1)/z))` on `P_n`.
pub fn g_map(n: usize, lambda: Lambda) -> LinMap {
    &slash(1, 1, 1, 0, n).scale(lambda.sign()) + &slash(1, -1, 1, 0, n)
}

/// The Γ(2) pair system `T̄φ₁ = Gφ₂`, `T̄φ₂ = Gφ₁` on `P_n²`.
pub fn build_gamma2_pair_system(n: u32, lambda: Lambda) -> Result<LewisSystem> {
    check_degree(n)?;
    let group = GroupSpec::principal(2)?;
    level_two_table(group, "gamma2_pair")?;
    let deg = n as usize;
    let (tbar, g) = (tbar_map(deg), g_map(deg, lambda));
    let mut asm = Assembler::new(2, deg + 1, 2, deg + 1);
    asm.add_block(0, 0, &tbar, 1);
    asm.add_block(0, 1, &g, -1);
    asm.add_block(1, 1, &tbar, 1);
    asm.add_block(1, 0, &g, -1);
    Ok(LewisSystem {
        kind: SystemKind::Gamma2Pair,
        group: Some(group),
        n,
        lambda: Some(lambda),
        matrix: asm.finish(),
        layout: UnknownLayout {
            components: 2,
            poly_len: deg + 1,
        },
    })
}

/// The scalar Γ₀(2) equation on `P_{n+1}`:
/// `φ(z) − φ(z+1) = (2z+1)ⁿ(λφ((z+1)/(2z+1)) + φ(z/(2z+1)))`.
///
/// For `φ` of degree `n+1` the right side is only a rational function, so
/// the equation is multiplied through by `2z+1` and matched in `P_{n+2}`.
pub fn build_gamma02_tilde_system(n: u32, lambda: Lambda) -> Result<LewisSystem> {
    check_degree(n)?;
    let group = GroupSpec::hecke(2)?;
    level_two_table(group, "gamma02_tilde")?;
    let m = n as usize + 1;
    let lhs = &multiply_map(m, &[1, 2]) * &(&LinMap::identity(m) - &shift_map(m, 1));
    let rhs = (&slash(1, 1, 2, 1, m).scale(lambda.sign()) + &slash(1, 0, 2, 1, m)).with_rows(m + 2);
    let mut asm = Assembler::new(1, m + 2, 1, m + 1);
    asm.add_block(0, 0, &lhs, 1);
    asm.add_block(0, 0, &rhs, -1);
    Ok(LewisSystem {
        kind: SystemKind::Gamma02Tilde,
        group: Some(group),
        n,
        lambda: Some(lambda),
        matrix: asm.finish(),
        layout: UnknownLayout {
            components: 1,
            poly_len: m + 1,
        },
    })
}

/// `Ω((z+1)/(−2z−1))·(−2z−1)^k + Ω(z) = 0` on `P_k`.
pub fn build_upsilon_system(k: u32) -> Result<LewisSystem> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidWeight(k));
    }
    let deg = k as usize;
    let map = &slash(1, 1, -2, -1, deg) + &LinMap::identity(deg);
    let mut asm = Assembler::new(1, deg + 1, 1, deg + 1);
    asm.add_block(0, 0, &map, 1);
    Ok(LewisSystem {
        kind: SystemKind::Upsilon,
        group: None,
        n: k,
        lambda: None,
        matrix: asm.finish(),
        layout: UnknownLayout {
            components: 1,
            poly_len: deg + 1,
        },
    })
}

/// Builds any system kind on an explicit coset table. `lambda` is ignored by
/// the kinds that have none, and required by the others; the table is
/// ignored by the fixed-group kinds.
pub fn build_system_for_table(
    kind: SystemKind,
    table: &CosetTable,
    n: u32,
    lambda: Option<Lambda>,
) -> Result<LewisSystem> {
    let lam = || lambda.unwrap_or(Lambda::Plus);
    match kind {
        SystemKind::Extended => build_extended_system(table, n, lam()),
        SystemKind::Reduced => build_reduced_system(table, n, lam()),
        SystemKind::Full => build_full_system(table, n, lam()),
        SystemKind::Master => build_master_system(table, n),
        SystemKind::Gamma2Pair => build_gamma2_pair_system(n, lam()),
        SystemKind::Gamma02Tilde => build_gamma02_tilde_system(n, lam()),
        SystemKind::Upsilon => build_upsilon_system(n),
    }
}

pub fn build_system(kind: SystemKind, group: GroupSpec, n: u32, lambda: Option<Lambda>) -> Result<LewisSystem> {
    match kind {
        SystemKind::Gamma2Pair => build_gamma2_pair_system(n, lambda.unwrap_or(Lambda::Plus)),
        SystemKind::Gamma02Tilde => build_gamma02_tilde_system(n, lambda.unwrap_or(Lambda::Plus)),
        SystemKind::Upsilon => build_upsilon_system(n),
        _ => {
            check_degree(n)?;
            build_system_for_table(kind, &coset_table(group)?, n, lambda)
        }
    }
}

/// Outcome of one nullspace-dimension computation.
#[derive(Clone, Debug)]
pub struct DimOutcome {
    pub dim: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank: RankResult,
    pub build_time: Duration,
}

pub fn solve_system(kind: SystemKind, group: GroupSpec, n: u32, lambda: Option<Lambda>, strategy: RankStrategy) -> Result<DimOutcome> {
    let start = Instant::now();
    let system = build_system(kind, group, n, lambda)?;
    let build_time = start.elapsed();
    let rank = system.rank(strategy);
    Ok(DimOutcome {
        dim: system.matrix.cols() - rank.rank,
        rows: system.matrix.rows(),
        cols: system.matrix.cols(),
        rank,
        build_time,
    })
}

/// Nullspace dimension of the assembled system.
pub fn dim_eigenspace(group: GroupSpec, n: u32, lambda: Lambda, kind: SystemKind, strategy: RankStrategy) -> Result<usize> {
    Ok(solve_system(kind, group, n, Some(lambda), strategy)?.dim)
}

/// Computed eigenspace dimensions beside the Eichler cohomology prediction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    pub group: GroupSpec,
    pub n: u32,
    pub dim_plus: u64,
    pub dim_minus: u64,
    pub dim_total: u64,
    pub predicted: u64,
    #[serde(rename = "match")]
    pub matches: bool,
    pub system: SystemKind,
    pub rank_method: RankMethod,
    pub build_ms: u64,
    pub rank_ms: u64,
}

/// Computes `dim ℘ₙ⁺ + dim ℘ₙ⁻` with `kind` (extended or reduced) and
/// compares it with `dim E_n`.
pub fn check_conjecture(group: GroupSpec, n: u32, kind: SystemKind, strategy: RankStrategy) -> Result<DimReport> {
    if !matches!(kind, SystemKind::Extended | SystemKind::Reduced) {
        return Err(Error::UnsupportedGroup {
            system: kind.name(),
            group,
            reason: "only the extended and reduced systems split by λ",
        });
    }
    let plus = solve_system(kind, group, n, Some(Lambda::Plus), strategy)?;
    let minus = solve_system(kind, group, n, Some(Lambda::Minus), strategy)?;
    let predicted = dim_eichler(group, n)?;
    let total = (plus.dim + minus.dim) as u64;
    let rank_method = if plus.rank.method == RankMethod::Exact || minus.rank.method == RankMethod::Exact {
        RankMethod::Exact
    } else {
        RankMethod::Modular
    };
    Ok(DimReport {
        group,
        n,
        dim_plus: plus.dim as u64,
        dim_minus: minus.dim as u64,
        dim_total: total,
        predicted,
        matches: total == predicted,
        system: kind,
        rank_method,
        build_ms: (plus.build_time + minus.build_time).as_millis() as u64,
        rank_ms: (plus.rank.elapsed + minus.rank.elapsed).as_millis() as u64,
    })
}
