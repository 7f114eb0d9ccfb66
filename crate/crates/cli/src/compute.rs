//! Cell computations shared by the subcommands, with optional caching.

use std::time::Instant;

use lewislab_core::lewis::build_system;
use lewislab_core::{GroupSpec, Lambda, RankMethod, RankStrategy, SystemKind, TOOL_VERSION};

use crate::cache::{now_secs, Cache, CacheKey, CacheRecord};
use crate::error::CliError;

pub struct Context {
    pub strategy: RankStrategy,
    pub cache: Option<Cache>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Computed {
    pub dim: u64,
    pub rank_method: RankMethod,
    pub elapsed_ms: u64,
}

/// The group a system actually lives on: the fixed-level systems ignore the
/// requested level but must be asked for with the matching family.
pub fn effective_group(kind: SystemKind, group: GroupSpec) -> Result<GroupSpec, CliError> {
    let fixed = match kind {
        SystemKind::Gamma2Pair => GroupSpec::principal(2)?,
        SystemKind::Gamma02Tilde => GroupSpec::hecke(2)?,
        _ => return Ok(group),
    };
    if group != fixed {
        return Err(CliError::Usage(format!("the {kind} system is defined only for {fixed}")));
    }
    Ok(fixed)
}

pub fn compute(ctx: &Context, group: GroupSpec, n: u32, lambda: Option<Lambda>, kind: SystemKind) -> Result<Computed, CliError> {
    let group = effective_group(kind, group)?;
    let lambda = if kind.uses_lambda() { lambda } else { None };
    let key = CacheKey {
        family: group.family,
        level: group.level,
        n,
        lambda,
        system: kind,
    };
    if let Some(rec) = ctx.cache.as_ref().and_then(|c| c.get(&key)) {
        return Ok(Computed {
            dim: rec.dim,
            rank_method: rec.rank_method,
            elapsed_ms: rec.elapsed_ms,
        });
    }
    let start = Instant::now();
    let system = build_system(kind, group, n, lambda)?;
    let rank = system.rank(ctx.strategy);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let dim = (system.matrix.cols() - rank.rank) as u64;
    if let Some(cache) = &ctx.cache {
        cache.put(&CacheRecord {
            key,
            tool_version: TOOL_VERSION.to_string(),
            dim,
            rank: rank.rank as u64,
            rows: system.matrix.rows() as u64,
            cols: system.matrix.cols() as u64,
            rank_method: rank.method,
            elapsed_ms,
            timestamp: now_secs(),
        })?;
    }
    Ok(Computed {
        dim,
        rank_method: rank.method,
        elapsed_ms,
    })
}

/// Combines the methods of several rank computations: exact if any was.
pub fn combined_method(parts: &[Computed]) -> RankMethod {
    if parts.iter().any(|c| c.rank_method == RankMethod::Exact) {
        RankMethod::Exact
    } else {
        RankMethod::Modular
    }
}
