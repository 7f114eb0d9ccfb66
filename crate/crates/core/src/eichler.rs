//! Dimension formulas for cusp forms, automorphic forms and Eichler
//! cohomology. `[x]` is the floor throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::psl2::{surface_invariants, GroupSpec};

fn check_weight(k: u32) -> Result<()> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidWeight(k));
    }
    Ok(())
}

/// `dim C_k(Γ)`: the genus for `k = 2`, otherwise
/// `(k−1)(g−1) + (k/2−1)v∞ + [k/4]v₂ + [k/3]v₃`.
pub fn dim_cusp(group: GroupSpec, k: u32) -> Result<u64> {
    check_weight(k)?;
    let inv = surface_invariants(group)?;
    if k == 2 {
        return Ok(inv.genus);
    }
    let k = i64::from(k);
    let value = (k - 1) * (inv.genus as i64 - 1)
        + (k / 2 - 1) * inv.v_inf as i64
        + (k / 4) * inv.v2 as i64
        + (k / 3) * inv.v3 as i64;
    u64::try_from(value).map_err(|_| Error::NegativeDimension {
        group,
        k: k as u32,
        value,
    })
}

/// `dim A_k(Γ) = dim C_k(Γ) + v∞`.
pub fn dim_automorphic(group: GroupSpec, k: u32) -> Result<u64> {
    Ok(dim_cusp(group, k)? + surface_invariants(group)?.v_inf)
}

/// `dim E_k(Γ) = 2 dim C_{k+2}(Γ) + v∞`.
pub fn dim_eichler(group: GroupSpec, k: u32) -> Result<u64> {
    Ok(eichler_prediction(group, k)?.dim_eichler)
}

/// `2[(k−1)/4] + 2`.
pub fn dim_upsilon_formula(k: u32) -> Result<u64> {
    check_weight(k)?;
    Ok(2 * u64::from((k - 1) / 4) + 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EichlerPrediction {
    pub group: GroupSpec,
    pub k: u32,
    pub dim_cusp_k_plus_2: u64,
    pub v_inf: u64,
    pub dim_eichler: u64,
}

pub fn eichler_prediction(group: GroupSpec, k: u32) -> Result<EichlerPrediction> {
    check_weight(k)?;
    let cusp = dim_cusp(group, k + 2)?;
    let v_inf = surface_invariants(group)?.v_inf;
    Ok(EichlerPrediction {
        group,
        k,
        dim_cusp_k_plus_2: cusp,
        v_inf,
        dim_eichler: 2 * cusp + v_inf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psl2::group_index;

    fn h(n: u32) -> GroupSpec {
        GroupSpec::hecke(n).unwrap()
    }

    fn p(n: u32) -> GroupSpec {
        GroupSpec::principal(n).unwrap()
    }

    #[test]
    fn cusp_dimensions() {
        assert_eq!(dim_cusp(h(11), 2).unwrap(), 1);
        assert_eq!(dim_cusp(h(3), 4).unwrap(), 0);
        // index/12·(k−1) − v∞/2 for principal groups
        for n in 2..=12 {
            let idx = group_index(p(n)) as i64;
            let v_inf = idx / i64::from(n);
            for k in (4..=26).step_by(2) {
                let twelve = idx * (k - 1) - 6 * v_inf;
                assert_eq!(twelve % 12, 0);
                assert_eq!(dim_cusp(p(n), k as u32).unwrap() as i64, twelve / 12, "N={n} k={k}");
            }
        }
    }

    #[test]
    fn automorphic_dimensions() {
        assert_eq!(dim_automorphic(h(3), 4).unwrap(), 2);
        assert_eq!(dim_automorphic(p(2), 4).unwrap(), dim_cusp(p(2), 4).unwrap() + 3);
        assert_eq!(dim_automorphic(h(11), 2).unwrap(), 3);
    }

    #[test]
    fn eichler_dimensions() {
        assert_eq!(dim_eichler(h(11), 2).unwrap(), 6);
        assert_eq!(dim_eichler(h(13), 12).unwrap(), 28);
        for k in (2..=30).step_by(2) {
            assert_eq!(dim_eichler(h(2), k).unwrap(), dim_upsilon_formula(k).unwrap());
            for n in 2..=8 {
                assert_eq!(dim_eichler(p(n), k).unwrap(), group_index(p(n)) / 6 * u64::from(k + 1));
            }
        }
    }

    #[test]
    fn upsilon_formula() {
        let got: Vec<u64> = [2, 4, 6, 8, 10].iter().map(|&k| dim_upsilon_formula(k).unwrap()).collect();
        assert_eq!(got, vec![2, 2, 4, 4, 6]);
    }

    #[test]
    fn odd_weights_rejected() {
        assert_eq!(dim_cusp(h(5), 3), Err(Error::InvalidWeight(3)));
        assert_eq!(dim_upsilon_formula(0), Err(Error::InvalidWeight(0)));
    }
}
