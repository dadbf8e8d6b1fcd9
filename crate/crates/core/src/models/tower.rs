use alloc::collections::BTreeMap;

use num_complex::Complex64;

use crate::algebra::OperatorSum;
use crate::error::{Error, Result};

/// The Onsager generators `A_m`, `G_m` built recursively from `A_0`, `A_1`.
#[derive(Clone, Debug)]
pub struct OnsagerTower {
    pub a: BTreeMap<i64, OperatorSum>,
    pub g: BTreeMap<i64, OperatorSum>,
}

impl OnsagerTower {
    pub fn depth(&self) -> i64 {
        self.a.keys().next_back().copied().unwrap_or(0)
    }
}

/// Builds `A_m` for `|m| ≤ depth` and `G_m` for `|m| ≤ depth` using
/// `G_1 = [A_1, A_0]/4`, `A_{m+1} = A_{m-1} + ½[G_1, A_m]`, the same
/// recursion run downwards, and `G_m = [A_m, A_0]/4 = −G_{−m}`.
pub fn onsager_tower(a0: &OperatorSum, a1: &OperatorSum, depth: usize) -> Result<OnsagerTower> {
    if depth == 0 {
        return Err(Error::InvalidArgument("tower depth must be at least 1".into()));
    }
    let quarter = Complex64::new(0.25, 0.0);
    let half = Complex64::new(0.5, 0.0);
    let d = depth as i64;
    let g1 = a1.commutator(a0)?.scale(quarter);
    let mut a = BTreeMap::new();
    a.insert(0, a0.clone());
    a.insert(1, a1.clone());
    for m in 1..d {
        let next = a[&(m - 1)].add(&g1.commutator(&a[&m])?.scale(half))?;
        a.insert(m + 1, next);
    }
    for n in (-d + 1..=0).rev() {
        let prev = a[&(n + 1)].sub(&g1.commutator(&a[&n])?.scale(half))?;
        a.insert(n - 1, prev);
    }
    let mut g = BTreeMap::new();
    g.insert(0, OperatorSum::zero(a0.order(), a0.sites()));
    for m in 1..=d {
        let gm = a[&m].commutator(a0)?.scale(quarter);
        g.insert(-m, gm.scale(Complex64::new(-1.0, 0.0)));
        g.insert(m, gm);
    }
    Ok(OnsagerTower { a, g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{onsager_generator, ModelSpec};

    #[test]
    fn tfim_tower_satisfies_onsager_relations() {
        let spec = ModelSpec::tfim(4, 1.0);
        let a0 = onsager_generator(&spec, 0).unwrap();
        let a1 = onsager_generator(&spec, 1).unwrap();
        let t = onsager_tower(&a0, &a1, 3).unwrap();
        assert_eq!(t.depth(), 3);
        let four = Complex64::new(4.0, 0.0);
        // [A_l, A_m] = 4 G_{l−m}
        for l in -3i64..=3 {
            for m in -3i64..=3 {
                if (l - m).abs() > 3 {
                    continue;
                }
                let lhs = t.a[&l].commutator(&t.a[&m]).unwrap();
                let rhs = t.g[&(l - m)].scale(four);
                assert!(lhs.distance(&rhs).unwrap() < 1e-10, "l={l} m={m}");
            }
        }
        // [G_l, G_m] = 0
        for l in 1..=3 {
            for m in 1..=3 {
                assert!(t.g[&l].commutator(&t.g[&m]).unwrap().hs_norm() < 1e-10);
            }
        }
    }
}
