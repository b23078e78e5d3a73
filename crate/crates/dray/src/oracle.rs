//! Independent brute-force references.
//!
//! Nothing here shares geometry code with the engine beyond the exact-linalg
//! primitives, so agreement between the two is a real check. Guards abort
//! rather than silently truncate.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cone::{InequalitySystem, Ray};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, RatVector};
use crate::perm::{PermGroup, Permutation, GROUP_ORDER_BOUND};
use crate::poset::Poset;
use crate::rat::rat;
use crate::sac::{ssa_check, SacMode, SacSystem};
use crate::sets::IndexSet;

/// A down-set extreme ray as reported by an oracle.
#[derive(Clone, Debug)]
pub struct OracleRay {
    pub ray: Ray,
    pub saturation: IndexSet,
}

/// Exhaustive scan of `(dim − 1)`-subsets of the duals: every subset of full
/// corank one spans a line, which is kept when it carries a ray of the cone
/// whose saturation set is a down-set avoiding `excluded`.
pub fn brute_force_ders(
    sys: &InequalitySystem,
    poset: &Poset,
    excluded: &IndexSet,
) -> Result<Vec<OracleRay>> {
    let k = sys.len();
    let n = sys.dim();
    if k > 22 && n > 12 {
        return Err(Error::ResourceGuard(format!(
            "brute force needs k ≤ 22 or dim ≤ 12, got k={k} dim={n}"
        )));
    }
    if n == 0 || k < n - 1 {
        return Ok(Vec::new());
    }
    // all (n−1)-subsets, in lexicographic order
    let mut subset: Vec<usize> = (0..n - 1).collect();
    let mut found: Vec<OracleRay> = Vec::new();
    let mut seen: Vec<IndexSet> = Vec::new();
    loop {
        let mut ech = Echelon::new(n);
        for &i in &subset {
            ech.insert(sys.int_duals[i].clone());
        }
        if ech.rank() == n - 1 {
            let ns = ech.nullspace_basis();
            debug_assert_eq!(ns.n_rows(), 1);
            let v = ns.row(0).clone();
            let cand = if sys.satisfies_all(&v).0 {
                Some(v)
            } else {
                let neg = v.scaled(&rat(-1));
                if sys.satisfies_all(&neg).0 {
                    Some(neg)
                } else {
                    None
                }
            };
            if let Some(v) = cand {
                let sat = sys.saturation_set(&v);
                if sat.is_disjoint_from(excluded)
                    && poset.is_down_set(&sat)
                    && !seen.contains(&sat)
                {
                    seen.push(sat.clone());
                    found.push(OracleRay { ray: Ray::from_direction(&v), saturation: sat });
                }
            }
        }
        // next combination
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(sort_oracle_rays(found));
            }
            i -= 1;
            if subset[i] != i + k - (n - 1) {
                subset[i] += 1;
                for j in i + 1..n - 1 {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn sort_oracle_rays(mut rays: Vec<OracleRay>) -> Vec<OracleRay> {
    rays.sort_by(|a, b| a.saturation.cmp(&b.saturation));
    rays
}

/// Summary of one symmetry orbit found by the conversion pipeline.
#[derive(Clone, Debug)]
pub struct PipelineOrbit {
    pub canonical: IndexSet,
    pub representative: OracleRay,
    pub size: usize,
    pub ssa_ok: bool,
    pub ssa_violations: usize,
}

/// The conversion baseline: reduce the genuine system onto the subspace where
/// all pairwise instances vanish, convert with double description, then keep
/// rays that satisfy everything, have down-set saturations outside the
/// excluded region, and group the survivors into label-group orbits.
pub fn dd_filter_pipeline(sac: &SacSystem, force: bool) -> Result<Vec<PipelineOrbit>> {
    if sac.ps.n_parties() > 4 && !force {
        return Err(Error::ResourceGuard(
            "conversion pipeline beyond 4 parties needs force".into(),
        ));
    }
    let (down, excluded) = sac.initial_sets(SacMode::Genuine)?;
    let keep = sac.system.all_indices().minus(&down.union(&excluded));
    let red = sac.system.reduced_system(&down, &keep)?;
    // a one-dimensional subspace needs no conversion: the line itself is the
    // only candidate, oriented into the cone
    let rays = if red.system.dim() == 1 {
        let one = RatVector::new(vec![crate::rat::rat(1)]);
        let lifted = red.lift(&one);
        let v = if sac.system.satisfies_all(&lifted).0 { one } else { one.scaled(&rat(-1)) };
        vec![Ray::from_direction(&v)]
    } else {
        red.system.double_description()?
    };
    let mut orbits: Vec<PipelineOrbit> = Vec::new();
    let candidates: Vec<Option<OracleRay>> = rays
        .par_iter()
        .map(|r| {
            let lifted = red.lift(r.generator());
            if !sac.system.satisfies_all(&lifted).0 {
                return None;
            }
            let sat = sac.system.saturation_set(&lifted);
            if !sat.is_disjoint_from(&excluded) || !sac.poset.is_down_set(&sat) {
                return None;
            }
            Some(OracleRay { ray: Ray::from_direction(&lifted), saturation: sat })
        })
        .collect();
    for cand in candidates.into_iter().flatten() {
        let canonical = sac.group.canonical_set(&cand.saturation);
        if orbits.iter().any(|o| o.canonical == canonical) {
            continue;
        }
        let stab = sac.group.set_stabilizer(&cand.saturation);
        let (ssa_ok, ssa_violations) = ssa_check(&sac.ps, cand.ray.generator());
        orbits.push(PipelineOrbit {
            canonical,
            representative: cand,
            size: sac.group.order() / stab.order(),
            ssa_ok,
            ssa_violations,
        });
    }
    orbits.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    Ok(orbits)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupChoice {
    Trivial,
    /// Swap two coordinates; duals are closed under the swap.
    CoordSwap,
    /// Cyclic shift of all coordinates.
    CoordCycle,
}

#[derive(Clone, Debug)]
pub struct RandomInstanceSpec {
    pub ambient_dim: usize,
    pub inequality_count: usize,
    pub poset_density: f64,
    pub group_choice: GroupChoice,
    pub seed: u64,
}

/// Seeded random pointed full-dimensional instance. The duals are closed
/// under the chosen coordinate action, so the induced index permutation
/// preserves the face lattice; the poset is built on orbit classes so the
/// same permutation preserves the order too.
pub fn random_instance(spec: &RandomInstanceSpec) -> Result<(InequalitySystem, Poset, PermGroup)> {
    let n = spec.ambient_dim;
    if !(2..=12).contains(&n) || spec.inequality_count < n || spec.inequality_count > 40 {
        return Err(Error::InvalidInput(
            "random instances support 2 ≤ dim ≤ 12 and dim ≤ count ≤ 40".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let coord_action: Option<Vec<usize>> = match spec.group_choice {
        GroupChoice::Trivial => None,
        GroupChoice::CoordSwap => {
            let mut images: Vec<usize> = (0..n).collect();
            images.swap(0, 1);
            Some(images)
        }
        GroupChoice::CoordCycle => Some((0..n).map(|i| (i + 1) % n).collect()),
    };
    'resample: for _ in 0..200 {
        // seed rows, then close them under the coordinate action
        let mut rows: Vec<Vec<i64>> = Vec::new();
        while rows.len() < spec.inequality_count {
            let seed_row: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            if seed_row.iter().all(|&x| x == 0) {
                continue;
            }
            let mut orbit = vec![seed_row];
            if let Some(action) = &coord_action {
                loop {
                    let last = orbit.last().unwrap();
                    let mut next = vec![0i64; n];
                    for (i, &im) in action.iter().enumerate() {
                        next[im] = last[i];
                    }
                    if orbit.contains(&next) {
                        break;
                    }
                    orbit.push(next);
                }
            }
            if rows.len() + orbit.len() > spec.inequality_count {
                continue;
            }
            for r in orbit {
                if !rows.contains(&r) {
                    rows.push(r);
                }
            }
        }
        let duals: Vec<RatVector> = rows.iter().map(|r| RatVector::from_ints(r)).collect();
        let Ok(sys) = InequalitySystem::new(n, duals, None) else {
            continue 'resample;
        };
        // induced permutation of inequality indices
        let index_perm: Option<Permutation> = match &coord_action {
            None => None,
            Some(action) => {
                let mut images = Vec::with_capacity(rows.len());
                for r in &rows {
                    let mut im = vec![0i64; n];
                    for (i, &to) in action.iter().enumerate() {
                        im[to] = r[i];
                    }
                    match rows.iter().position(|x| x == &im) {
                        Some(p) => images.push(p as u32),
                        None => continue 'resample,
                    }
                }
                Some(Permutation::from_images(images)?)
            }
        };
        let group = match index_perm {
            None => PermGroup::trivial(rows.len()),
            Some(p) => PermGroup::generate(rows.len(), vec![p], GROUP_ORDER_BOUND)?,
        };
        // order on orbit classes: class i ≺ class j with probability density,
        // lifted to members so the group action preserves the relation
        let k = rows.len();
        let class_of: Vec<usize> = {
            let mut class = vec![usize::MAX; k];
            let mut next = 0;
            for i in 0..k {
                if class[i] == usize::MAX {
                    for j in group.orbit_of_element(i).iter() {
                        class[j] = next;
                    }
                    next += 1;
                }
            }
            class
        };
        let n_classes = class_of.iter().max().unwrap() + 1;
        let mut class_rel = vec![vec![false; n_classes]; n_classes];
        for a in 0..n_classes {
            for b in a + 1..n_classes {
                if rng.gen_bool(spec.poset_density) {
                    class_rel[a][b] = true;
                }
            }
        }
        // transitive closure over classes
        for m in 0..n_classes {
            for a in 0..n_classes {
                for b in 0..n_classes {
                    if class_rel[a][m] && class_rel[m][b] {
                        class_rel[a][b] = true;
                    }
                }
            }
        }
        let poset = Poset::from_leq(k, |i, j| {
            i == j || class_rel[class_of[i]][class_of[j]]
        })?;
        return Ok((sys, poset, group));
    }
    Err(Error::ResourceGuard("could not sample a pointed full-dimensional cone".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The square cone with poset 2 ⪯ 1 (indices), as in the engine tests.
    fn square() -> (InequalitySystem, Poset) {
        let sys = InequalitySystem::new(
            3,
            vec![
                RatVector::from_ints(&[0, -1, 1]),
                RatVector::from_ints(&[-1, 0, 1]),
                RatVector::from_ints(&[0, 1, 1]),
                RatVector::from_ints(&[1, 0, 1]),
            ],
            None,
        )
        .unwrap();
        let poset = Poset::from_covers(4, &[(2, 1)]).unwrap();
        (sys, poset)
    }

    #[test]
    fn brute_force_square() {
        let (sys, poset) = square();
        let rays = brute_force_ders(&sys, &poset, &IndexSet::empty(4)).unwrap();
        let sats: Vec<Vec<usize>> = rays.iter().map(|r| r.saturation.to_vec()).collect();
        assert_eq!(sats.len(), 3);
        for expect in [vec![1, 2], vec![2, 3], vec![0, 3]] {
            assert!(sats.contains(&expect), "missing {expect:?}");
        }
    }

    #[test]
    fn brute_force_orthant() {
        let sys = InequalitySystem::new(
            3,
            vec![
                RatVector::from_ints(&[1, 0, 0]),
                RatVector::from_ints(&[0, 1, 0]),
                RatVector::from_ints(&[0, 0, 1]),
            ],
            None,
        )
        .unwrap();
        let rays = brute_force_ders(&sys, &Poset::antichain(3), &IndexSet::empty(3)).unwrap();
        assert_eq!(rays.len(), 3);
    }

    #[test]
    fn guard_rejects_large_instances() {
        let spec = RandomInstanceSpec {
            ambient_dim: 13,
            inequality_count: 30,
            poset_density: 0.3,
            group_choice: GroupChoice::Trivial,
            seed: 1,
        };
        assert!(random_instance(&spec).is_err());
    }

    #[test]
    fn random_instances_are_reproducible() {
        let spec = RandomInstanceSpec {
            ambient_dim: 4,
            inequality_count: 8,
            poset_density: 0.4,
            group_choice: GroupChoice::CoordSwap,
            seed: 7,
        };
        let (a_sys, a_poset, a_group) = random_instance(&spec).unwrap();
        let (b_sys, b_poset, b_group) = random_instance(&spec).unwrap();
        assert_eq!(a_sys.duals(), b_sys.duals());
        assert_eq!(a_poset.cover_pairs(), b_poset.cover_pairs());
        assert_eq!(a_group.order(), b_group.order());
    }

    #[test]
    fn density_extremes() {
        for (density, expect_chain) in [(0.0, false), (1.0, true)] {
            let spec = RandomInstanceSpec {
                ambient_dim: 3,
                inequality_count: 5,
                poset_density: density,
                group_choice: GroupChoice::Trivial,
                seed: 3,
            };
            let (_, poset, _) = random_instance(&spec).unwrap();
            let covers = poset.cover_pairs();
            if expect_chain {
                // a total order has exactly k−1 covers
                assert_eq!(covers.len(), poset.size() - 1);
            } else {
                assert!(covers.is_empty());
            }
        }
    }
}
