//! The enumeration machine.
//!
//! Work items are triplets `(D, U, G_D)`: a down-set `D` of saturated
//! inequalities picking out a subspace, an excluded up-set `U` marking
//! regions whose rays are found elsewhere (or unwanted), and the stabilizer
//! `G_D` of `D` inside the global symmetry group. One subroutine call grows
//! `D` by orbit representatives of the maximal frontier elements, closes
//! under the configured closure operator, prunes by orbit equivalence, and
//! triages the offspring by the rank of what remains: full rank is kept,
//! deficit one pins down a single candidate ray, anything looser cannot
//! carve a pointed cone and is dropped.

use std::collections::VecDeque;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cone::{InequalitySystem, Ray};
use crate::error::{Error, Result};
use crate::linalg::IntRow;
use crate::perm::PermGroup;
use crate::poset::Poset;
use crate::rat::Rat;
use crate::sets::IndexSet;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClosureVariant {
    /// Iterated linear-dependence ∘ down-set closure (default).
    Ld,
    /// Iterated face ∘ down-set closure (exact faces, LP-backed).
    Fd,
}

#[derive(Clone, Debug)]
pub struct StopRule {
    /// Stop processing a triplet once its subspace dimension is ≤ this.
    pub dim_at_most: usize,
    /// Also stop once `|U|/|M|` reaches this fraction.
    pub excluded_frac: Option<Rat>,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule { dim_at_most: 1, excluded_frac: None }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum OrderRule {
    /// Ascending subspace dimension, then descending |D|, then canonical form.
    #[default]
    Default,
    /// Canonical form of the down-set only.
    ByName,
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub closure: ClosureVariant,
    pub stop: StopRule,
    pub order: OrderRule,
    pub dedup_queue: bool,
    pub simplicial_shortcut: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            closure: ClosureVariant::Ld,
            stop: StopRule::default(),
            order: OrderRule::Default,
            dedup_queue: false,
            simplicial_shortcut: true,
        }
    }
}

#[derive(Clone)]
pub struct Triplet {
    pub down: IndexSet,
    pub excluded: IndexSet,
    pub stab: Arc<PermGroup>,
    pub dim: usize,
}

impl std::fmt::Debug for Triplet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Triplet")
            .field("|D|", &self.down.len())
            .field("dim", &self.dim)
            .field("|U|", &self.excluded.len())
            .field("|G_D|", &self.stab.order())
            .finish()
    }
}

/// Truth values of the four validity conditions for a triplet.
#[derive(Clone, Copy, Debug)]
pub struct ConditionReport {
    pub disjoint: bool,
    pub dim_above_one: bool,
    pub excluded_invariant: bool,
    pub deficit: usize,
}

impl ConditionReport {
    pub fn validated(&self) -> bool {
        self.disjoint && self.dim_above_one && self.excluded_invariant && self.deficit == 0
    }
}

/// A down-set extreme ray as found by the engine.
#[derive(Clone, Debug)]
pub struct FoundRay {
    pub ray: Ray,
    /// Full saturation set of the generator (a down-set).
    pub saturation: IndexSet,
    /// Canonical form of the saturation set under the global group.
    pub canonical: IndexSet,
    /// The saturation set meets the run's base excluded region (the ray is a
    /// valid D-ER of the cone but was asked to be ignored; it is dropped
    /// from final results).
    pub in_excluded_region: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ColumnStatus {
    /// Conditions hold; triplet enqueued.
    Kept,
    /// Conditions hold and the reduced cone is simplicial; rays read off.
    Simplicial,
    /// Rank deficit one; the candidate ray passed all checks.
    RayFound,
    /// Rank deficit one; the candidate failed orientation/SA/down-set checks.
    RayRejected,
    /// Rank deficit above one; no pointed cone, dropped.
    Discarded,
}

impl ColumnStatus {
    pub fn letter(self) -> char {
        match self {
            ColumnStatus::Kept => 'K',
            ColumnStatus::Simplicial => 'S',
            ColumnStatus::RayFound => 'R',
            ColumnStatus::RayRejected => 'X',
            ColumnStatus::Discarded => 'D',
        }
    }
}

/// The four reported attributes of one triplet column.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ColumnStats {
    pub down_len: usize,
    pub dim: usize,
    pub excluded_len: usize,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct ColumnRecord {
    pub stats: ColumnStats,
    pub status: ColumnStatus,
}

/// Per-iteration trace: one column per triplet after the update pass,
/// residual included, in emission order.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    pub columns: Vec<ColumnRecord>,
    /// Rays emitted by the one-dimensional closure branch (not visible as
    /// columns).
    pub inline_rays: usize,
}

pub struct SubroutineOutput {
    pub triplets: Vec<Triplet>,
    pub rays: Vec<FoundRay>,
    pub record: IterationRecord,
}

pub struct EnumerationResult {
    /// One representative per G-orbit, sorted by canonical saturation set.
    pub rays: Vec<FoundRay>,
    /// Triplets left unprocessed by the stop rule.
    pub open: Vec<Triplet>,
    pub trace: Vec<IterationRecord>,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct OrbitSummary {
    pub representative: FoundRay,
    pub size: usize,
}

impl EnumerationResult {
    pub fn orbits(&self, group: &PermGroup) -> Vec<OrbitSummary> {
        self.rays
            .iter()
            .map(|r| {
                let stab = group.set_stabilizer(&r.saturation);
                OrbitSummary {
                    representative: r.clone(),
                    size: group.order() / stab.order(),
                }
            })
            .collect()
    }
}

pub struct Engine<'a> {
    pub sys: &'a InequalitySystem,
    pub poset: &'a Poset,
    pub group: &'a PermGroup,
    pub cfg: EngineConfig,
}

/// Fixpoint of linear-dependence closure ∘ down-set closure.
pub fn cl_ld(sys: &InequalitySystem, poset: &Poset, x: &IndexSet) -> IndexSet {
    iterate_closure(x, |y| sys.linear_closure(&poset.down_closure(y)))
}

/// Fixpoint of face closure ∘ down-set closure.
pub fn cl_fd(sys: &InequalitySystem, poset: &Poset, x: &IndexSet) -> IndexSet {
    iterate_closure(x, |y| sys.face_closure(&poset.down_closure(y)))
}

fn iterate_closure(x: &IndexSet, step: impl Fn(&IndexSet) -> IndexSet) -> IndexSet {
    let mut cur = x.clone();
    loop {
        let next = step(&cur);
        if next == cur {
            return next;
        }
        cur = next;
    }
}

impl<'a> Engine<'a> {
    pub fn new(
        sys: &'a InequalitySystem,
        poset: &'a Poset,
        group: &'a PermGroup,
        cfg: EngineConfig,
    ) -> Self {
        assert_eq!(sys.len(), poset.size(), "system and poset sizes differ");
        assert_eq!(sys.len(), group.degree(), "system and group degrees differ");
        Engine { sys, poset, group, cfg }
    }

    pub fn close(&self, x: &IndexSet) -> IndexSet {
        match self.cfg.closure {
            ClosureVariant::Ld => cl_ld(self.sys, self.poset, x),
            ClosureVariant::Fd => cl_fd(self.sys, self.poset, x),
        }
    }

    /// Assemble a triplet: close the down-set, compute its stabilizer and
    /// subspace dimension. The excluded set must be invariant under the
    /// stabilizer.
    pub fn make_triplet(&self, down: &IndexSet, excluded: &IndexSet) -> Result<Triplet> {
        let closed = self.close(down);
        let stab = Arc::new(self.group.set_stabilizer(&closed));
        for g in stab.elements() {
            if &g.map_set(excluded) != excluded {
                return Err(Error::NotInvariant);
            }
        }
        let dim = self.sys.subspace_dim(&closed);
        Ok(Triplet { down: closed, excluded: excluded.clone(), stab, dim })
    }

    pub fn check_conditions(&self, t: &Triplet) -> ConditionReport {
        let excluded_invariant = t
            .stab
            .elements()
            .iter()
            .all(|g| g.map_set(&t.excluded) == t.excluded);
        ConditionReport {
            disjoint: t.down.is_disjoint_from(&t.excluded),
            dim_above_one: t.dim > 1,
            excluded_invariant,
            deficit: self.sys.rank_deficit(&t.down, &t.excluded),
        }
    }

    fn stop_fn(&self, t: &Triplet) -> bool {
        if t.dim <= self.cfg.stop.dim_at_most {
            return true;
        }
        if let Some(frac) = &self.cfg.stop.excluded_frac {
            let lhs = Rat::new(t.excluded.len().into(), 1.into());
            let bound = frac * Rat::new(self.sys.len().into(), 1.into());
            if lhs >= bound {
                return true;
            }
        }
        false
    }

    /// A candidate ray from a subspace already known to be one-dimensional:
    /// orient the generator into the cone, then insist the saturation set
    /// avoids the base excluded region and is a down-set. Rays saturating
    /// only later bookkeeping exclusions are legitimate duplicates and are
    /// kept (orbit dedup removes them at the end).
    fn candidate_ray(&self, saturate: &IndexSet, excluded: &IndexSet) -> Option<FoundRay> {
        let basis = self.sys.subspace_basis(saturate);
        if basis.dim() != 1 {
            return None;
        }
        let v = basis.basis.row(0).clone();
        let oriented = if self.sys.satisfies_all(&v).0 {
            v
        } else {
            let neg = v.scaled(&-Rat::from_integer(1.into()));
            if self.sys.satisfies_all(&neg).0 {
                neg
            } else {
                return None;
            }
        };
        let saturation = self.sys.saturation_set(&oriented);
        if !self.poset.is_down_set(&saturation) {
            return None;
        }
        debug_assert!(self.sys.is_extreme_ray(&oriented).unwrap_or(false));
        Some(FoundRay {
            ray: Ray::from_direction(&oriented),
            canonical: self.group.canonical_set(&saturation),
            in_excluded_region: !saturation.is_disjoint_from(excluded),
            saturation,
        })
    }

    /// Orbit-complete the excluded set under the triplet's stabilizer, then
    /// repeatedly move whole orbits into it whenever adjoining an orbit
    /// representative to the down-set closes onto the excluded region.
    pub fn algorithm5_update(&self, t: &Triplet) -> Result<Triplet> {
        let mut excluded = t.stab.orbit_union(&t.excluded);
        loop {
            let rest = self.sys.all_indices().minus(&t.down.union(&excluded));
            let orbits = t.stab.partition_into_orbits(&rest)?;
            let hits: Vec<bool> = orbits
                .par_iter()
                .map(|orb| {
                    let rep = orb.first().expect("orbits are nonempty");
                    let mut seed = t.down.clone();
                    seed.insert(rep);
                    !self.close(&seed).is_disjoint_from(&excluded)
                })
                .collect();
            let mut changed = false;
            for (orb, hit) in orbits.iter().zip(&hits) {
                if *hit {
                    excluded.union_with(orb);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(Triplet {
            down: t.down.clone(),
            excluded,
            stab: t.stab.clone(),
            dim: t.dim,
        })
    }

    /// Rank triage of an updated triplet; returns its trace column, the
    /// triplet itself when it should be enqueued, and any ray it produced.
    /// `base_excluded` is the run's initial excluded region: candidate rays
    /// must stay off it, while later bookkeeping exclusions only mark
    /// duplicates.
    fn triage(
        &self,
        t: Triplet,
        base_excluded: &IndexSet,
    ) -> (ColumnRecord, Option<Triplet>, Vec<FoundRay>) {
        let deficit = self.sys.rank_deficit(&t.down, &t.excluded);
        let stats = ColumnStats {
            down_len: t.down.len(),
            dim: t.dim,
            excluded_len: t.excluded.len(),
            rank: t.dim - deficit,
        };
        if t.dim <= 1 {
            let rays: Vec<FoundRay> =
                self.candidate_ray(&t.down, base_excluded).into_iter().collect();
            let status = if rays.is_empty() {
                ColumnStatus::RayRejected
            } else {
                ColumnStatus::RayFound
            };
            return (ColumnRecord { stats, status }, None, rays);
        }
        match deficit {
            0 => {
                if self.cfg.simplicial_shortcut {
                    if let Ok(Some(rays)) = self.simplicial_check(&t) {
                        return (
                            ColumnRecord { stats, status: ColumnStatus::Simplicial },
                            None,
                            rays,
                        );
                    }
                }
                (ColumnRecord { stats, status: ColumnStatus::Kept }, Some(t), Vec::new())
            }
            1 => {
                // Saturating the down-set plus everything outside the
                // excluded set pins down a one-dimensional subspace; check
                // it carries a valid ray.
                let saturate = t.down.union(&self.sys.all_indices().minus(&t.excluded));
                let rays: Vec<FoundRay> =
                    self.candidate_ray(&saturate, base_excluded).into_iter().collect();
                let status = if rays.is_empty() {
                    ColumnStatus::RayRejected
                } else {
                    ColumnStatus::RayFound
                };
                (ColumnRecord { stats, status }, None, rays)
            }
            _ => (ColumnRecord { stats, status: ColumnStatus::Discarded }, None, Vec::new()),
        }
    }

    /// One pass over a validated triplet: grow the down-set by frontier
    /// orbit representatives, close, dedup under the stabilizer, derive the
    /// cumulative excluded regions, update, append the residual, triage.
    pub fn main_subroutine(
        &self,
        t: &Triplet,
        base_excluded: &IndexSet,
    ) -> Result<SubroutineOutput> {
        let all = self.sys.all_indices();
        let rest = all.minus(&t.down.union(&t.excluded));
        let frontier = self.poset.maximal_of(&rest);
        let orbits = t.stab.partition_into_orbits(&frontier)?;
        let closures: Vec<IndexSet> = orbits
            .par_iter()
            .map(|orb| {
                let mut seed = t.down.clone();
                seed.insert(orb.first().expect("orbits are nonempty"));
                self.close(&seed)
            })
            .collect();

        let mut u_bar = t.excluded.clone();
        let mut inline_rays: Vec<FoundRay> = Vec::new();
        let mut survivors: Vec<(IndexSet, IndexSet, usize)> = Vec::new();
        for (orb, dm) in orbits.iter().zip(closures.into_iter()) {
            if !dm.is_disjoint_from(&t.excluded) {
                u_bar.union_with(orb);
                continue;
            }
            let dm_dim = self.sys.subspace_dim(&dm);
            if dm_dim <= 1 {
                if dm_dim == 1 {
                    inline_rays.extend(self.candidate_ray(&dm, base_excluded));
                }
                u_bar.union_with(orb);
                continue;
            }
            survivors.push((dm, orb.clone(), dm_dim));
        }
        // A survivor's closure avoiding U also avoids the enlarged set: the
        // closure commutes with the stabilizer action, so a hit would have
        // surfaced for the survivor itself.
        for (dm, _, _) in &survivors {
            debug_assert!(dm.is_disjoint_from(&u_bar));
        }

        // Merge survivors whose closures agree up to the stabilizer.
        struct Class {
            canonical: IndexSet,
            down: IndexSet,
            generators: IndexSet,
            dim: usize,
        }
        let canon: Vec<IndexSet> = survivors
            .par_iter()
            .map(|(dm, _, _)| t.stab.canonical_set(dm))
            .collect();
        let mut classes: Vec<Class> = Vec::new();
        for ((dm, orb, dim), key) in survivors.into_iter().zip(canon.into_iter()) {
            match classes.iter_mut().find(|c| c.canonical == key) {
                Some(c) => c.generators.union_with(&orb),
                None => classes.push(Class { canonical: key, down: dm, generators: orb, dim }),
            }
        }

        // Order and assign cumulative excluded regions.
        match self.cfg.order {
            OrderRule::Default => classes.sort_by(|a, b| {
                a.dim
                    .cmp(&b.dim)
                    .then(b.down.len().cmp(&a.down.len()))
                    .then(b.generators.len().cmp(&a.generators.len()))
                    .then(a.generators.first().cmp(&b.generators.first()))
                    .then(a.canonical.cmp(&b.canonical))
            }),
            OrderRule::ByName => classes.sort_by(|a, b| a.canonical.cmp(&b.canonical)),
        }
        let mut generated: Vec<Triplet> = Vec::new();
        let mut u_acc = u_bar.clone();
        for c in &classes {
            let stab = Arc::new(self.group.set_stabilizer(&c.down));
            generated.push(Triplet {
                down: c.down.clone(),
                excluded: u_acc.clone(),
                stab,
                dim: c.dim,
            });
            u_acc.union_with(&c.generators);
        }

        // Residual triplet: the face itself with the whole frontier
        // excluded; it runs through the same update pass as the offspring.
        generated.push(Triplet {
            down: t.down.clone(),
            excluded: t.excluded.union(&frontier),
            stab: t.stab.clone(),
            dim: t.dim,
        });
        let updated: Vec<Triplet> = generated
            .par_iter()
            .map(|trip| self.algorithm5_update(trip))
            .collect::<Result<_>>()?;

        let mut columns = Vec::with_capacity(updated.len());
        let mut triplets = Vec::new();
        let mut rays = inline_rays;
        let n_inline = rays.len();
        for trip in updated {
            let (col, keep, mut found) = self.triage(trip, base_excluded);
            columns.push(col);
            triplets.extend(keep);
            rays.append(&mut found);
        }
        Ok(SubroutineOutput {
            triplets,
            rays,
            record: IterationRecord { columns, inline_rays: n_inline },
        })
    }

    /// Whether the queue already covers `cand` up to the global group: some
    /// queued triplet is a G-image of the candidate's down-set whose
    /// excluded region the candidate's image contains.
    fn queue_covers(&self, queue: &VecDeque<Triplet>, cand: &Triplet, cand_key: &IndexSet) -> bool {
        for q in queue {
            if q.down.len() != cand.down.len() {
                continue;
            }
            if &self.group.canonical_set(&q.down) != cand_key {
                continue;
            }
            for g in self.group.elements() {
                if g.map_set(&cand.down) == q.down
                    && q.excluded.is_subset_of(&g.map_set(&cand.excluded))
                {
                    return true;
                }
            }
        }
        false
    }

    /// The global loop: repeatedly run the subroutine on every queued
    /// triplet the stop rule does not hold for, collecting rays; stopped
    /// triplets are returned open. The final ray list carries one
    /// representative per G-orbit.
    pub fn run(&self, down: &IndexSet, excluded: &IndexSet) -> Result<EnumerationResult> {
        let initial = self.make_triplet(down, excluded)?;
        let mut queue: VecDeque<Triplet> = VecDeque::new();
        let mut rays: Vec<FoundRay> = Vec::new();
        let mut trace: Vec<IterationRecord> = Vec::new();
        // The initial triplet is triaged like any other (it may already be
        // one-dimensional or rank-deficient).
        {
            let (col, keep, mut found) = self.triage(initial, excluded);
            trace.push(IterationRecord { columns: vec![col], inline_rays: 0 });
            rays.append(&mut found);
            queue.extend(keep);
        }
        self.drive(queue, rays, trace, 0, excluded)
    }

    /// Continue a run from a saved queue and ray list.
    pub fn resume(
        &self,
        open: Vec<Triplet>,
        rays: Vec<FoundRay>,
        prior_iterations: usize,
        base_excluded: &IndexSet,
    ) -> Result<EnumerationResult> {
        self.drive(open.into(), rays, Vec::new(), prior_iterations, base_excluded)
    }

    fn drive(
        &self,
        mut queue: VecDeque<Triplet>,
        mut rays: Vec<FoundRay>,
        mut trace: Vec<IterationRecord>,
        prior_iterations: usize,
        base_excluded: &IndexSet,
    ) -> Result<EnumerationResult> {
        let mut iterations = prior_iterations;
        loop {
            let mut batch: Vec<Triplet> = Vec::new();
            let mut kept: VecDeque<Triplet> = VecDeque::new();
            for t in queue.drain(..) {
                if self.stop_fn(&t) {
                    kept.push_back(t);
                } else {
                    batch.push(t);
                }
            }
            queue = kept;
            if batch.is_empty() {
                break;
            }
            let outputs: Vec<SubroutineOutput> = batch
                .par_iter()
                .map(|t| self.main_subroutine(t, base_excluded))
                .collect::<Result<_>>()?;
            for out in outputs {
                iterations += 1;
                trace.push(out.record);
                rays.extend(out.rays);
                for child in out.triplets {
                    if self.cfg.dedup_queue {
                        let key = self.group.canonical_set(&child.down);
                        if self.queue_covers(&queue, &child, &key) {
                            continue;
                        }
                    }
                    queue.push_back(child);
                }
            }
        }
        let rays = dedup_by_orbit(rays);
        Ok(EnumerationResult { rays, open: queue.into_iter().collect(), trace, iterations })
    }

    /// Extract the rays of an open triplet by converting the reduced cone on
    /// its subspace, then filtering: rays touching the excluded region are
    /// dropped (locally first, then against the full system), survivors are
    /// lifted and must satisfy every inequality with a down-set saturation.
    pub fn post_process(&self, t: &Triplet) -> Result<Vec<FoundRay>> {
        let all = self.sys.all_indices();
        let keep = all.minus(&t.down.union(&t.excluded));
        let red = self.sys.reduced_system(&t.down, &keep)?;
        debug_assert!(red.dropped.is_empty(), "closed down-set leaves no zero reductions");
        let rays_red = red.system.double_description()?;

        // Reduced excluded functionals; one vanishing identically would mean
        // the whole face is excluded.
        let mut u_reduced: Vec<IntRow> = Vec::with_capacity(t.excluded.len());
        for u in t.excluded.iter() {
            let r = red.subspace.reduce_dual(&self.sys.int_duals[u]);
            if r.is_zero() {
                return Ok(Vec::new());
            }
            u_reduced.push(r);
        }
        // Local necessary condition: within the kept members, saturating a
        // reduced inequality forces saturating everything below it.
        let local_below: Vec<Vec<usize>> = red
            .kept
            .iter()
            .map(|&j| {
                red.kept
                    .iter()
                    .enumerate()
                    .filter(|&(_, &i)| i != j && self.poset.leq(i, j))
                    .map(|(local, _)| local)
                    .collect()
            })
            .collect();

        let found: Vec<FoundRay> = rays_red
            .par_iter()
            .filter_map(|ray| {
                let rv = IntRow::from_rats(ray.generator().coords());
                if u_reduced.iter().any(|u| u.dot_sign(&rv) == 0) {
                    return None;
                }
                let zero: Vec<bool> = red
                    .system
                    .int_duals
                    .iter()
                    .map(|d| d.dot_sign(&rv) == 0)
                    .collect();
                for (j, below) in local_below.iter().enumerate() {
                    if zero[j] && below.iter().any(|&i| !zero[i]) {
                        return None;
                    }
                }
                let lifted = red.lift(ray.generator());
                if !self.sys.satisfies_all(&lifted).0 {
                    return None;
                }
                let saturation = self.sys.saturation_set(&lifted);
                if !saturation.is_disjoint_from(&t.excluded) {
                    return None;
                }
                if !self.poset.is_down_set(&saturation) {
                    return None;
                }
                Some(FoundRay {
                    ray: Ray::from_direction(&lifted),
                    canonical: self.group.canonical_set(&saturation),
                    in_excluded_region: false,
                    saturation,
                })
            })
            .collect();
        Ok(found)
    }

    /// When the reduced cone has exactly `dim` non-redundant inequalities it
    /// is simplicial and its rays can be read off directly. Counting facets
    /// needs one LP per distinct direction, so the LP route only runs when
    /// the distinct count is already within a small slack of the dimension.
    pub fn simplicial_check(&self, t: &Triplet) -> Result<Option<Vec<FoundRay>>> {
        const REDUNDANCY_SLACK: usize = 4;
        let all = self.sys.all_indices();
        let keep = all.minus(&t.down.union(&t.excluded));
        let red = self.sys.reduced_system(&t.down, &keep)?;
        let mut distinct: Vec<&IntRow> = Vec::new();
        for d in &red.system.int_duals {
            if !distinct.iter().any(|e| e.same_values(d)) {
                distinct.push(d);
            }
        }
        let simplicial = if distinct.len() == t.dim {
            true
        } else if distinct.len() <= t.dim + REDUNDANCY_SLACK {
            let dedup = InequalitySystem::from_duals_unchecked(
                red.system.dim(),
                distinct.iter().map(|d| d.to_rat_vector()).collect(),
                None,
            )?;
            let facets = (0..dedup.len())
                .filter(|&i| !dedup.is_redundant_inequality(i))
                .count();
            facets == t.dim
        } else {
            false
        };
        if !simplicial {
            return Ok(None);
        }
        self.post_process(t).map(Some)
    }

    /// Run `post_process` over every open triplet and fold the rays into the
    /// result's orbit-deduplicated list.
    pub fn finish_open(&self, result: &EnumerationResult) -> Result<Vec<FoundRay>> {
        let mut rays = result.rays.clone();
        let extra: Vec<Vec<FoundRay>> = result
            .open
            .par_iter()
            .map(|t| self.post_process(t))
            .collect::<Result<_>>()?;
        for mut v in extra {
            rays.append(&mut v);
        }
        Ok(dedup_by_orbit(rays))
    }
}

/// One representative per canonical saturation set, deterministic choice;
/// rays flagged as lying in the base excluded region are dropped.
pub fn dedup_by_orbit(mut rays: Vec<FoundRay>) -> Vec<FoundRay> {
    rays.retain(|r| !r.in_excluded_region);
    rays.sort_by(|a, b| {
        a.canonical
            .cmp(&b.canonical)
            .then_with(|| a.saturation.cmp(&b.saturation))
    });
    rays.dedup_by(|a, b| a.canonical == b.canonical);
    rays
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RatVector;
    use crate::perm::{Permutation, PermGroup};

    fn set(u: usize, v: &[usize]) -> IndexSet {
        IndexSet::from_indices(u, v.iter().copied())
    }

    /// Square cone with the poset putting index 2 below index 1 and the
    /// order-preserving swap (0 3) as symmetry.
    fn square() -> (InequalitySystem, Poset, PermGroup) {
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
        let group = PermGroup::trivial(4);
        (sys, poset, group)
    }

    #[test]
    fn closure_compositions_on_square() {
        let (sys, poset, _) = square();
        // adjoining index 1 pulls in 2 below it; the pair is already a face
        assert_eq!(cl_fd(&sys, &poset, &set(4, &[1])), set(4, &[1, 2]));
        assert_eq!(cl_ld(&sys, &poset, &set(4, &[1])), set(4, &[1, 2]));
        // closed sets stay put
        assert_eq!(cl_fd(&sys, &poset, &set(4, &[2])), set(4, &[2]));
        // {0, 2} spans opposite facets; the face is the apex, all close in
        assert_eq!(cl_fd(&sys, &poset, &set(4, &[0, 2])), IndexSet::full(4));
    }

    #[test]
    fn engine_square_downset_rays() {
        let (sys, poset, group) = square();
        let engine = Engine::new(&sys, &poset, &group, EngineConfig::default());
        let result = engine.run(&IndexSet::empty(4), &IndexSet::empty(4)).unwrap();
        // D-ERs of the square cone under 2 ⪯ 1: saturations {1,2},{2,3},{0,3};
        // {0,1} is an extreme ray but not a down-set.
        let sats: Vec<Vec<usize>> = result.rays.iter().map(|r| r.saturation.to_vec()).collect();
        assert_eq!(result.rays.len(), 3, "got {sats:?}");
        for expect in [vec![1, 2], vec![2, 3], vec![0, 3]] {
            assert!(sats.contains(&expect), "missing {expect:?} in {sats:?}");
        }
        for r in &result.rays {
            assert!(sys.is_extreme_ray(r.ray.generator()).unwrap());
            assert!(poset.is_down_set(&r.saturation));
        }
    }

    #[test]
    fn engine_variants_agree_on_square() {
        let (sys, poset, group) = square();
        let mut canon_sets: Vec<Vec<IndexSet>> = Vec::new();
        for closure in [ClosureVariant::Ld, ClosureVariant::Fd] {
            for order in [OrderRule::Default, OrderRule::ByName] {
                for dedup in [false, true] {
                    for simplicial in [false, true] {
                        let cfg = EngineConfig {
                            closure,
                            order,
                            dedup_queue: dedup,
                            simplicial_shortcut: simplicial,
                            ..EngineConfig::default()
                        };
                        let engine = Engine::new(&sys, &poset, &group, cfg);
                        let result =
                            engine.run(&IndexSet::empty(4), &IndexSet::empty(4)).unwrap();
                        canon_sets
                            .push(result.rays.iter().map(|r| r.canonical.clone()).collect());
                    }
                }
            }
        }
        for w in canon_sets.windows(2) {
            assert_eq!(w[0], w[1]);
        }
    }

    #[test]
    fn stop_rule_keeps_triplets_open() {
        let (sys, poset, group) = square();
        let cfg = EngineConfig {
            stop: StopRule { dim_at_most: 99, excluded_frac: None },
            ..EngineConfig::default()
        };
        let engine = Engine::new(&sys, &poset, &group, cfg);
        let result = engine.run(&IndexSet::empty(4), &IndexSet::empty(4)).unwrap();
        assert_eq!(result.iterations, 0);
        assert_eq!(result.open.len(), 1);
        assert!(result.rays.is_empty());
        // post-processing the untouched triplet recovers all D-ERs
        let finished = engine.finish_open(&result).unwrap();
        assert_eq!(finished.len(), 3);
    }

    #[test]
    fn excluded_region_blocks_rays() {
        let (sys, poset, group) = square();
        let engine = Engine::new(&sys, &poset, &group, EngineConfig::default());
        // excluding the up-set of {3} removes the two rays saturating 3
        let excluded = poset.up_set_of(&set(4, &[3]));
        let result = engine.run(&IndexSet::empty(4), &excluded).unwrap();
        let sats: Vec<Vec<usize>> = result.rays.iter().map(|r| r.saturation.to_vec()).collect();
        assert_eq!(sats, vec![vec![1, 2]]);
    }

    #[test]
    fn conditions_report() {
        let (sys, poset, group) = square();
        let engine = Engine::new(&sys, &poset, &group, EngineConfig::default());
        let t = engine.make_triplet(&IndexSet::empty(4), &IndexSet::empty(4)).unwrap();
        let rep = engine.check_conditions(&t);
        assert!(rep.validated());
        // synthetic overlap fails condition (i)
        let bad = Triplet {
            down: set(4, &[2]),
            excluded: set(4, &[2]),
            stab: t.stab.clone(),
            dim: 2,
        };
        assert!(!engine.check_conditions(&bad).disjoint);
    }
}
