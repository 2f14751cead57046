//! Subgroups, their classification up to conjugacy, and double cosets.
//!
//! A subgroup is a sorted set of element indices into its parent group. The
//! sorted member vector doubles as the subgroup's canonical digest, used for
//! deduplication and class lookup.

use std::collections::HashMap;
use std::sync::Arc;

use crate::group::{FiniteGroup, GroupError};

#[derive(Clone)]
pub struct Subgroup {
    group: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

impl Subgroup {
    /// Wraps a member set after checking the subgroup axioms.
    pub fn new(group: Arc<FiniteGroup>, mut members: Vec<usize>) -> Result<Self, GroupError> {
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            group.check_index(m)?;
        }
        if members.binary_search(&0).is_err() {
            return Err(GroupError::NotASubgroup("missing identity"));
        }
        for &a in &members {
            if members.binary_search(&group.inv(a)).is_err() {
                return Err(GroupError::NotASubgroup("not closed under inversion"));
            }
            for &b in &members {
                if members.binary_search(&group.mul(a, b)).is_err() {
                    return Err(GroupError::NotASubgroup("not closed under multiplication"));
                }
            }
        }
        Ok(Subgroup { group, members })
    }

    /// Internal constructor for member sets already known to be subgroups.
    pub(crate) fn from_members_unchecked(group: Arc<FiniteGroup>, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subgroup { group, members }
    }

    pub fn generated_by(group: Arc<FiniteGroup>, generators: &[usize]) -> Result<Self, GroupError> {
        for &g in generators {
            group.check_index(g)?;
        }
        let mut in_set = vec![false; group.order()];
        in_set[0] = true;
        let mut members = vec![0usize];
        let mut frontier = vec![0usize];
        let mut gens: Vec<usize> = generators.to_vec();
        gens.extend(generators.iter().map(|&g| group.inv(g)));
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = group.mul(x, g);
                if !in_set[y] {
                    in_set[y] = true;
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
        members.sort_unstable();
        Ok(Subgroup { group, members })
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        Subgroup {
            group,
            members: vec![0],
        }
    }

    pub fn whole(group: Arc<FiniteGroup>) -> Self {
        let members = (0..group.order()).collect();
        Subgroup { group, members }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, elem: usize) -> bool {
        self.members.binary_search(&elem).is_ok()
    }

    /// Position of an element within the sorted member list.
    pub fn local_index(&self, elem: usize) -> Option<usize> {
        self.members.binary_search(&elem).ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        Arc::ptr_eq(&self.group, &other.group)
            && self.members.iter().all(|&m| other.contains(m))
    }

    pub fn is_whole_group(&self) -> bool {
        self.order() == self.group.order()
    }

    /// The conjugate `a·H·a⁻¹`.
    pub fn conjugate(&self, a: usize) -> Result<Subgroup, GroupError> {
        self.group.check_index(a)?;
        let mut members: Vec<usize> =
            self.members.iter().map(|&h| self.group.conj(a, h)).collect();
        members.sort_unstable();
        Ok(Subgroup {
            group: Arc::clone(&self.group),
            members,
        })
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup, GroupError> {
        if !Arc::ptr_eq(&self.group, &other.group) {
            return Err(GroupError::GroupMismatch);
        }
        let members: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&m| other.contains(m))
            .collect();
        Ok(Subgroup {
            group: Arc::clone(&self.group),
            members,
        })
    }

    /// Normalizer `N_G(H) = {g : g·H·g⁻¹ = H}` by direct scan.
    pub fn normalizer(&self) -> Subgroup {
        let g = &self.group;
        let members: Vec<usize> = (0..g.order())
            .filter(|&a| {
                self.members
                    .iter()
                    .all(|&h| self.contains(g.conj(a, h)))
            })
            .collect();
        Subgroup {
            group: Arc::clone(g),
            members,
        }
    }

    /// Centralizer of `g` inside this subgroup: `{h ∈ H : hg = gh}`.
    pub fn centralizer(&self, elem: usize) -> Result<Subgroup, GroupError> {
        self.group.check_index(elem)?;
        let g = &self.group;
        let members: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&h| g.mul(h, elem) == g.mul(elem, h))
            .collect();
        Ok(Subgroup {
            group: Arc::clone(g),
            members,
        })
    }

    /// Conjugacy classes of this subgroup acting on itself; each class is
    /// sorted and classes are ordered by their minimal member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let g = &self.group;
        let mut classified = vec![false; self.members.len()];
        let mut classes = Vec::new();
        for (i, &x) in self.members.iter().enumerate() {
            if classified[i] {
                continue;
            }
            let mut class: Vec<usize> = self
                .members
                .iter()
                .map(|&a| g.conj(a, x))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                classified[self.local_index(y).expect("conjugate stays in subgroup")] = true;
            }
            classes.push(class);
        }
        classes
    }

    pub fn exponent(&self) -> usize {
        self.members
            .iter()
            .fold(1, |acc, &m| crate::group::lcm(acc, self.group.element_order(m)))
    }

    pub fn element_orders(&self) -> Vec<usize> {
        self.members
            .iter()
            .map(|&m| self.group.element_order(m))
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.members.iter().all(|&a| {
            self.members
                .iter()
                .all(|&b| self.group.mul(a, b) == self.group.mul(b, a))
        })
    }
}

/// Enumerates every subgroup by cyclic extension: seed with all cyclic
/// subgroups, then repeatedly adjoin one element to known subgroups and
/// close, deduplicating by member set. Result is sorted by
/// (order, member set).
pub fn all_subgroups(group: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let n = group.order();
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
    let mut queue: Vec<Vec<usize>> = Vec::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for g in 0..n {
        let cyc = Subgroup::generated_by(Arc::clone(group), &[g]).expect("valid index");
        if seen.insert(cyc.members.clone(), ()).is_none() {
            queue.push(cyc.members.clone());
            out.push(cyc.members);
        }
    }
    while let Some(members) = queue.pop() {
        if members.len() == n {
            continue;
        }
        for g in 0..n {
            if members.binary_search(&g).is_ok() {
                continue;
            }
            let mut gens = members.clone();
            gens.push(g);
            let ext = Subgroup::generated_by(Arc::clone(group), &gens).expect("valid indices");
            if seen.insert(ext.members.clone(), ()).is_none() {
                queue.push(ext.members.clone());
                out.push(ext.members);
            }
        }
    }
    out.sort_unstable_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    out.into_iter()
        .map(|members| Subgroup::from_members_unchecked(Arc::clone(group), members))
        .collect()
}

pub struct SubgroupClass {
    pub representative: Subgroup,
    pub conjugates: Vec<Subgroup>,
    pub normalizer: Subgroup,
}

/// All subgroups grouped into conjugacy classes, with a lookup from any
/// subgroup's member set to its class and a conjugating element.
pub struct SubgroupClassTable {
    group: Arc<FiniteGroup>,
    pub classes: Vec<SubgroupClass>,
    lookup: HashMap<Vec<usize>, (usize, usize)>,
}

impl SubgroupClassTable {
    /// Classifies all subgroups up to conjugacy. Classes are sorted by
    /// (order, canonical member set) of their representatives.
    pub fn build(group: &Arc<FiniteGroup>) -> Self {
        let subgroups = all_subgroups(group);
        let mut lookup: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        let mut classes: Vec<SubgroupClass> = Vec::new();
        for sub in &subgroups {
            if lookup.contains_key(sub.members()) {
                continue;
            }
            let class_index = classes.len();
            let mut conjugates: Vec<Subgroup> = Vec::new();
            for a in 0..group.order() {
                let conj = sub.conjugate(a).expect("valid index");
                if !lookup.contains_key(conj.members()) {
                    lookup.insert(conj.members().to_vec(), (class_index, a));
                    conjugates.push(conj);
                }
            }
            conjugates.sort_unstable_by(|x, y| x.members.cmp(&y.members));
            classes.push(SubgroupClass {
                representative: sub.clone(),
                conjugates,
                normalizer: sub.normalizer(),
            });
        }
        SubgroupClassTable {
            group: Arc::clone(group),
            classes,
            lookup,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, i: usize) -> &SubgroupClass {
        &self.classes[i]
    }

    /// Class index of the whole group (always the last class).
    pub fn whole_group_class(&self) -> usize {
        self.classes.len() - 1
    }

    /// Class index of the trivial subgroup (always class 0).
    pub fn trivial_class(&self) -> usize {
        0
    }

    /// Looks up a subgroup: returns `(class index, g)` where conjugation by
    /// `g` maps the class representative onto the queried subgroup.
    pub fn class_of(&self, sub: &Subgroup) -> Result<(usize, usize), GroupError> {
        if !Arc::ptr_eq(&self.group, &sub.group) {
            return Err(GroupError::GroupMismatch);
        }
        self.lookup
            .get(sub.members())
            .copied()
            .ok_or(GroupError::NotASubgroup("unknown member set"))
    }

    /// Index of a class among the classes sharing its subgroup order; used
    /// for the `H<order>#<k>` labels.
    pub fn order_local_index(&self, class_index: usize) -> usize {
        let order = self.classes[class_index].representative.order();
        self.classes[..class_index]
            .iter()
            .filter(|c| c.representative.order() == order)
            .count()
    }

    /// Resolves an `H<order>#<k>` pair back to a class index.
    pub fn class_by_order_index(&self, order: usize, k: usize) -> Option<usize> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.representative.order() == order)
            .nth(k)
            .map(|(i, _)| i)
    }

    pub fn total_subgroup_count(&self) -> usize {
        self.classes.iter().map(|c| c.conjugates.len()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleCoset {
    pub representative: usize,
    pub size: usize,
}

/// Partitions the parent group into double cosets `H·a·K`, sorted by their
/// minimal representatives.
pub fn double_cosets(h: &Subgroup, k: &Subgroup) -> Result<Vec<DoubleCoset>, GroupError> {
    if !Arc::ptr_eq(&h.group, &k.group) {
        return Err(GroupError::GroupMismatch);
    }
    let g = &h.group;
    let n = g.order();
    let mut assigned = vec![false; n];
    let mut cosets = Vec::new();
    for rep in 0..n {
        if assigned[rep] {
            continue;
        }
        let mut size = 0;
        for &a in &h.members {
            let left = g.mul(a, rep);
            for &b in &k.members {
                let x = g.mul(left, b);
                if !assigned[x] {
                    assigned[x] = true;
                    size += 1;
                }
            }
        }
        cosets.push(DoubleCoset {
            representative: rep,
            size,
        });
    }
    Ok(cosets)
}

/// Left cosets `xH`, each sorted, ordered by minimal member; also returns
/// the map element → coset index.
pub fn left_cosets(h: &Subgroup) -> (Vec<Vec<usize>>, Vec<usize>) {
    let g = &h.group;
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut cosets = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let idx = cosets.len();
        let mut coset: Vec<usize> = h.members.iter().map(|&m| g.mul(x, m)).collect();
        coset.sort_unstable();
        for &y in &coset {
            coset_of[y] = idx;
        }
        cosets.push(coset);
    }
    (cosets, coset_of)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;

    fn s3() -> Arc<FiniteGroup> {
        named_group("S3", 100).unwrap()
    }

    #[test]
    fn s3_has_six_subgroups_in_four_classes() {
        let g = s3();
        let subs = all_subgroups(&g);
        assert_eq!(subs.len(), 6);
        let table = SubgroupClassTable::build(&g);
        assert_eq!(table.len(), 4);
        let orders: Vec<usize> = table
            .classes
            .iter()
            .map(|c| c.representative.order())
            .collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        let sizes: Vec<usize> = table.classes.iter().map(|c| c.conjugates.len()).collect();
        assert_eq!(sizes, vec![1, 3, 1, 1]);
    }

    #[test]
    fn trivial_group_has_one_class() {
        let g = FiniteGroup::trivial();
        let table = SubgroupClassTable::build(&g);
        assert_eq!(table.len(), 1);
        assert_eq!(table.whole_group_class(), 0);
    }

    #[test]
    fn c2xc2_has_five_classes_all_normal() {
        let g = named_group("C2xC2", 10).unwrap();
        let table = SubgroupClassTable::build(&g);
        assert_eq!(table.len(), 5);
        assert!(table.classes.iter().all(|c| c.conjugates.len() == 1));
        assert_eq!(table.total_subgroup_count(), 5);
    }

    #[test]
    fn lookup_conjugator_maps_representative_onto_query() {
        let g = named_group("D4", 100).unwrap();
        let table = SubgroupClassTable::build(&g);
        for sub in all_subgroups(&g) {
            let (ci, a) = table.class_of(&sub).unwrap();
            let rep = &table.class(ci).representative;
            assert_eq!(rep.conjugate(a).unwrap(), sub);
        }
    }

    #[test]
    fn double_cosets_partition_s3() {
        let g = s3();
        let table = SubgroupClassTable::build(&g);
        let h = table.class(1).representative.clone();
        assert_eq!(h.order(), 2);
        let dc = double_cosets(&h, &h).unwrap();
        let sizes: Vec<usize> = dc.iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![2, 4]);
        assert_eq!(dc[0].representative, 0);
    }

    #[test]
    fn whole_group_gives_single_double_coset() {
        let g = named_group("D4", 100).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let table = SubgroupClassTable::build(&g);
        for class in &table.classes {
            let dc = double_cosets(&whole, &class.representative).unwrap();
            assert_eq!(dc.len(), 1);
            assert_eq!(dc[0].size, g.order());
        }
    }

    #[test]
    fn c2xc2_c2_double_cosets_have_size_two() {
        let g = named_group("C2xC2", 10).unwrap();
        let table = SubgroupClassTable::build(&g);
        let h = table.class(1).representative.clone();
        let dc = double_cosets(&h, &h).unwrap();
        assert_eq!(dc.len(), 2);
        assert!(dc.iter().all(|c| c.size == 2));
    }

    #[test]
    fn conjugation_by_identity_fixes_subgroup() {
        let g = s3();
        for sub in all_subgroups(&g) {
            assert_eq!(sub.conjugate(0).unwrap(), sub);
            assert_eq!(sub.intersect(&sub).unwrap(), sub);
        }
    }

    #[test]
    fn s3_c2_meets_c3_trivially() {
        let g = s3();
        let table = SubgroupClassTable::build(&g);
        let c2 = &table.class(1).representative;
        let c3 = &table.class(2).representative;
        let meet = c2.intersect(c3).unwrap();
        assert_eq!(meet.order(), 1);
    }

    #[test]
    fn conjugate_composition_law() {
        let g = named_group("D4", 100).unwrap();
        let table = SubgroupClassTable::build(&g);
        for class in &table.classes {
            let h = &class.representative;
            for a in 0..g.order() {
                for b in 0..g.order() {
                    let two_step = h.conjugate(a).unwrap().conjugate(b).unwrap();
                    let one_step = h.conjugate(g.mul(b, a)).unwrap();
                    assert_eq!(two_step, one_step);
                }
            }
        }
    }

    #[test]
    fn normalizer_contains_subgroup() {
        let g = named_group("A4", 100).unwrap();
        let table = SubgroupClassTable::build(&g);
        for class in &table.classes {
            let h = &class.representative;
            assert!(h.is_subset_of(&class.normalizer));
            assert_eq!(g.order() % class.normalizer.order(), 0);
            // Orbit-stabilizer: number of conjugates = index of normalizer.
            assert_eq!(
                class.conjugates.len(),
                g.order() / class.normalizer.order()
            );
        }
    }

    #[test]
    fn centralizer_of_identity_is_whole_subgroup() {
        let g = named_group("D4", 100).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        assert_eq!(whole.centralizer(0).unwrap(), whole);
    }

    #[test]
    fn double_coset_size_formula() {
        for spec in ["S3", "D4", "A4"] {
            let g = named_group(spec, 100).unwrap();
            let table = SubgroupClassTable::build(&g);
            for hc in &table.classes {
                for kc in &table.classes {
                    let h = &hc.representative;
                    let k = &kc.representative;
                    let dc = double_cosets(h, k).unwrap();
                    assert_eq!(dc.iter().map(|c| c.size).sum::<usize>(), g.order());
                    for coset in &dc {
                        let conj_k = k.conjugate(coset.representative).unwrap();
                        let meet = h.intersect(&conj_k).unwrap();
                        assert_eq!(coset.size, h.order() * k.order() / meet.order());
                    }
                }
            }
        }
    }
}
