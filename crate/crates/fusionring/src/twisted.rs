//! The twisted Burnside ring: basis pairs ⟨subgroup class, cohomology
//! class⟩ and the fusion product
//! `⟨H, μ⟩⟨K, σ⟩ = Σ_{HaK ∈ H\G/K} ⟨H ∩ ᵃK, μσᵃ⟩`.
//!
//! Basis keys are canonical: the subgroup up to conjugacy, then the
//! cohomology coordinates up to the induced action of the normalizer of the
//! class representative (lexicographically minimal orbit member). That
//! closure is what makes the product well defined on keys — transporting a
//! pair by any conjugation lands on the same key, which the property suite
//! checks directly.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::burnside::BurnsideElement;
use crate::cache::H2Cache;
use crate::cocycle::Cochain2;
use crate::cohomology::{h2_units, CohomologyCaps, CohomologyError, H2Group};
use crate::group::FiniteGroup;
use crate::subgroup::{double_cosets, SubgroupClassTable};

/// Canonical basis key: subgroup class index plus canonical cohomology
/// coordinates of the twist on the class representative.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FusionBasisKey {
    pub subgroup_class: usize,
    pub coords: Vec<i64>,
}

/// Sparse integer combination of fusion basis keys.
#[derive(Clone, PartialEq, Eq)]
pub struct TwistedElement {
    group: Arc<FiniteGroup>,
    coeffs: BTreeMap<FusionBasisKey, i64>,
}

impl std::fmt::Debug for TwistedElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TwistedElement{:?}", self.coeffs)
    }
}

impl TwistedElement {
    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        TwistedElement {
            group,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(group: Arc<FiniteGroup>, key: FusionBasisKey) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(key, 1);
        TwistedElement { group, coeffs }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &BTreeMap<FusionBasisKey, i64> {
        &self.coeffs
    }

    pub fn coeff(&self, key: &FusionBasisKey) -> i64 {
        self.coeffs.get(key).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// A single basis key with coefficient one, if that is what this is.
    pub fn as_single_basis_key(&self) -> Option<&FusionBasisKey> {
        match self.coeffs.iter().next() {
            Some((key, &1)) if self.coeffs.len() == 1 => Some(key),
            _ => None,
        }
    }

    fn insert_checked(&mut self, key: FusionBasisKey, delta: i64) {
        let entry = self.coeffs.entry(key.clone()).or_insert(0);
        *entry = entry
            .checked_add(delta)
            .expect("integer overflow in twisted coefficients");
        if *entry == 0 {
            self.coeffs.remove(&key);
        }
    }

    pub fn add(&self, other: &TwistedElement) -> Result<TwistedElement, CohomologyError> {
        if !Arc::ptr_eq(&self.group, &other.group) {
            return Err(crate::group::GroupError::GroupMismatch.into());
        }
        let mut out = self.clone();
        for (key, &c) in &other.coeffs {
            out.insert_checked(key.clone(), c);
        }
        Ok(out)
    }
}

/// Invertible elements of the twisted ring and their group structure.
#[derive(Debug, Clone)]
pub struct InvertiblesReport {
    /// The invertible basis keys, in canonical basis order.
    pub elements: Vec<FusionBasisKey>,
    /// `table[i][j]` = index into `elements` of the product of `i` and `j`.
    pub table: Vec<Vec<usize>>,
    /// Invariant factors of the group they form, read off the
    /// multiplication table by order counting.
    pub invariant_factors: Vec<i64>,
    /// Invariant factors of `H²(G, k×)`.
    pub h2_invariant_factors: Vec<i64>,
    /// Whether every invertible sits at the whole-group class and vice versa.
    pub all_at_whole_group: bool,
    /// The reproduced statement: invertibles = {⟨G, c⟩} with group ≅ H²(G, k×).
    pub matches_h2: bool,
}

const MAX_COORDINATE_TUPLES: usize = 1 << 20;

/// The twisted Burnside ring of a fixed group: cohomology per subgroup
/// class, canonical basis, and the fusion product.
pub struct FusionRing {
    classes: Arc<SubgroupClassTable>,
    modulus: i64,
    h2: Vec<H2Group>,
    canon: Vec<BTreeMap<Vec<i64>, Vec<i64>>>,
    basis: Vec<FusionBasisKey>,
}

impl FusionRing {
    /// Computes `H²(rep, k×)` for every subgroup class (read-through cache,
    /// misses computed in parallel) and builds the canonical basis.
    pub fn new(
        classes: Arc<SubgroupClassTable>,
        caps: &CohomologyCaps,
        mut cache: Option<&mut H2Cache>,
    ) -> Result<FusionRing, CohomologyError> {
        let group = Arc::clone(classes.group());
        let modulus = group.order() as i64;
        let spec = group.spec().to_string();

        let mut slots: Vec<Option<H2Group>> = Vec::with_capacity(classes.len());
        for class in &classes.classes {
            let rep = &class.representative;
            let hit = cache.as_deref().and_then(|c| {
                c.get(&spec, rep.members(), modulus)
                    .and_then(|record| H2Group::from_record(rep.clone(), modulus, record))
            });
            slots.push(hit);
        }
        let missing: Vec<usize> = (0..classes.len()).filter(|&i| slots[i].is_none()).collect();
        let computed: Vec<(usize, H2Group)> = missing
            .par_iter()
            .map(|&ci| {
                h2_units(&classes.class(ci).representative, modulus, caps).map(|h2| (ci, h2))
            })
            .collect::<Result<_, _>>()?;
        for (ci, h2) in computed {
            if let Some(cache) = cache.as_deref_mut() {
                let rep = &classes.class(ci).representative;
                // Cache write failures only cost future recomputation.
                let _ = cache.put(&spec, rep.members(), modulus, h2.to_record());
            }
            slots[ci] = Some(h2);
        }
        let h2: Vec<H2Group> = slots.into_iter().map(|s| s.expect("slot filled")).collect();

        let mut canon = Vec::with_capacity(classes.len());
        let mut basis = Vec::new();
        for (ci, class) in classes.classes.iter().enumerate() {
            let map = canonical_orbit_map(&h2[ci], class)?;
            let mut canons: Vec<Vec<i64>> = map.values().cloned().collect();
            canons.sort();
            canons.dedup();
            for coords in canons {
                basis.push(FusionBasisKey {
                    subgroup_class: ci,
                    coords,
                });
            }
            canon.push(map);
        }
        Ok(FusionRing {
            classes,
            modulus,
            h2,
            canon,
            basis,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.classes.group()
    }

    pub fn classes(&self) -> &SubgroupClassTable {
        &self.classes
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    /// Canonical basis keys, ordered by (subgroup class, coordinates).
    pub fn basis(&self) -> &[FusionBasisKey] {
        &self.basis
    }

    pub fn h2(&self, class: usize) -> &H2Group {
        &self.h2[class]
    }

    /// The unit key `⟨G, 0⟩`.
    pub fn unit_key(&self) -> FusionBasisKey {
        let whole = self.classes.whole_group_class();
        FusionBasisKey {
            subgroup_class: whole,
            coords: vec![0; self.h2[whole].rank()],
        }
    }

    pub fn one(&self) -> TwistedElement {
        TwistedElement::basis(Arc::clone(self.group()), self.unit_key())
    }

    pub fn basis_element(&self, key: &FusionBasisKey) -> TwistedElement {
        TwistedElement::basis(Arc::clone(self.group()), key.clone())
    }

    /// Canonical orbit representative of a coordinate tuple under the
    /// normalizer action at the given class.
    pub fn canonical_coords(
        &self,
        class: usize,
        coords: &[i64],
    ) -> Result<Vec<i64>, CohomologyError> {
        let reduced = self.h2[class].reduce_coords(coords)?;
        Ok(self.canon[class]
            .get(&reduced)
            .expect("every reduced tuple has a canonical representative")
            .clone())
    }

    /// Canonical basis key of a pair (subgroup, cocycle): transports the
    /// cocycle to the class representative, coordinates it, and reduces to
    /// the canonical normalizer orbit member.
    pub fn canonicalize(&self, c: &Cochain2) -> Result<FusionBasisKey, CohomologyError> {
        if c.modulus() != self.modulus {
            return Err(CohomologyError::ModulusMismatch {
                expected: self.modulus,
                got: c.modulus(),
            });
        }
        if !c.is_cocycle() {
            return Err(CohomologyError::NotACocycle);
        }
        let (ci, g) = self.classes.class_of(c.subgroup())?;
        // The lookup's g maps representative → subgroup, so g⁻¹ transports
        // the cocycle back onto the representative.
        let on_rep = if g == 0 {
            c.clone()
        } else {
            c.conjugate(self.group().inv(g))?
        };
        let coords = self.h2[ci].class_coordinates(&on_rep)?;
        let canonical = self.canonical_coords(ci, &coords)?;
        Ok(FusionBasisKey {
            subgroup_class: ci,
            coords: canonical,
        })
    }

    /// Representative cocycle of a key, living on the class representative.
    pub fn representative_cocycle(
        &self,
        key: &FusionBasisKey,
    ) -> Result<Cochain2, CohomologyError> {
        self.h2[key.subgroup_class].representative(&key.coords)
    }

    /// `⟨H, μ⟩⟨K, σ⟩ = Σ_{HaK} ⟨H ∩ ᵃK, μ|∩ + σᵃ|∩⟩`, canonicalized.
    pub fn basis_product(
        &self,
        left: &FusionBasisKey,
        right: &FusionBasisKey,
    ) -> Result<TwistedElement, CohomologyError> {
        let h = &self.classes.class(left.subgroup_class).representative;
        let k = &self.classes.class(right.subgroup_class).representative;
        let mu = self.representative_cocycle(left)?;
        let sigma = self.representative_cocycle(right)?;
        let mut out = TwistedElement::zero(Arc::clone(self.group()));
        for coset in double_cosets(h, k)? {
            let sigma_a = sigma.conjugate(coset.representative)?;
            let meet = h.intersect(sigma_a.subgroup())?;
            let twist = mu.restrict(&meet)?.add(&sigma_a.restrict(&meet)?)?;
            let key = self.canonicalize(&twist)?;
            out.insert_checked(key, 1);
        }
        Ok(out)
    }

    /// Bilinear extension of `basis_product`.
    pub fn product(
        &self,
        x: &TwistedElement,
        y: &TwistedElement,
    ) -> Result<TwistedElement, CohomologyError> {
        if !Arc::ptr_eq(x.group(), self.group()) || !Arc::ptr_eq(y.group(), self.group()) {
            return Err(crate::group::GroupError::GroupMismatch.into());
        }
        let mut out = TwistedElement::zero(Arc::clone(self.group()));
        for (ka, &a) in &x.coeffs {
            for (kb, &b) in &y.coeffs {
                let base = self.basis_product(ka, kb)?;
                let scale = a.checked_mul(b).expect("integer overflow");
                for (key, &c) in &base.coeffs {
                    out.insert_checked(
                        key.clone(),
                        c.checked_mul(scale).expect("integer overflow"),
                    );
                }
            }
        }
        Ok(out)
    }

    /// Forgets twists: `⟨H, μ⟩ ↦ ⟨H⟩`, a unital ring homomorphism onto the
    /// untwisted Burnside ring.
    pub fn forget_twist(&self, x: &TwistedElement) -> BurnsideElement {
        let mut out = BurnsideElement::zero(Arc::clone(self.group()));
        for (key, &c) in &x.coeffs {
            out.insert_checked(key.subgroup_class, c);
        }
        out
    }

    /// Number of μ-regular conjugacy classes of the key's subgroup: the rank
    /// of the associated projective representation category.
    pub fn projective_rank(&self, key: &FusionBasisKey) -> Result<usize, CohomologyError> {
        let mu = self.representative_cocycle(key)?;
        regular_class_count(&mu)
    }

    /// Finds every invertible basis key by brute product search and reads
    /// off the group they form.
    pub fn invertibles(&self) -> Result<InvertiblesReport, CohomologyError> {
        let one = self.one();
        let mut elements = Vec::new();
        for x in &self.basis {
            let invertible = self
                .basis
                .iter()
                .any(|y| match self.basis_product(x, y) {
                    Ok(p) => p == one,
                    Err(_) => false,
                });
            if invertible {
                elements.push(x.clone());
            }
        }
        let whole = self.classes.whole_group_class();
        let at_whole: Vec<&FusionBasisKey> = self
            .basis
            .iter()
            .filter(|k| k.subgroup_class == whole)
            .collect();
        let all_at_whole_group = elements.iter().all(|k| k.subgroup_class == whole)
            && at_whole.len() == elements.len();

        let index_of = |key: &FusionBasisKey| elements.iter().position(|k| k == key);
        let mut table = vec![vec![0usize; elements.len()]; elements.len()];
        let mut closed = true;
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                let prod = self.basis_product(x, y)?;
                match prod.as_single_basis_key().and_then(index_of) {
                    Some(k) => table[i][j] = k,
                    None => closed = false,
                }
            }
        }
        let identity = index_of(&self.unit_key());
        let invariant_factors = match (closed, identity) {
            (true, Some(id)) => {
                let orders = crate::structure::element_orders_from_table(elements.len(), id, |a, b| {
                    table[a][b]
                });
                crate::structure::invariant_factors_from_orders(&orders)
            }
            _ => Vec::new(),
        };
        let h2_invariant_factors = self.h2[whole].invariant_factors().to_vec();
        let matches_h2 = all_at_whole_group
            && closed
            && invariant_factors == h2_invariant_factors
            && elements.len() as i64 == self.h2[whole].order();
        Ok(InvertiblesReport {
            elements,
            table,
            invariant_factors,
            h2_invariant_factors,
            all_at_whole_group,
            matches_h2,
        })
    }

    /// Products of all basis pairs, row-major, computed in parallel.
    pub fn fusion_table(&self) -> Result<Vec<TwistedElement>, CohomologyError> {
        let n = self.basis.len();
        (0..n * n)
            .into_par_iter()
            .map(|idx| self.basis_product(&self.basis[idx / n], &self.basis[idx % n]))
            .collect()
    }

    /// Stable label `H<order>#<k>[coords]` where `k` counts classes of the
    /// same subgroup order.
    pub fn key_label(&self, key: &FusionBasisKey) -> String {
        let class = self.classes.class(key.subgroup_class);
        let coords: Vec<String> = key.coords.iter().map(|c| c.to_string()).collect();
        format!(
            "H{}#{}[{}]",
            class.representative.order(),
            self.classes.order_local_index(key.subgroup_class),
            coords.join(",")
        )
    }

    /// Parses a key label back; accepts non-canonical coordinates and
    /// reduces them to the canonical orbit representative.
    pub fn parse_key_label(&self, text: &str) -> Result<FusionBasisKey, String> {
        let err = || format!("invalid basis key '{text}' (expected H<order>#<k>[c1,c2,...])");
        let rest = text.strip_prefix('H').ok_or_else(err)?;
        let (order_s, rest) = rest.split_once('#').ok_or_else(err)?;
        let (k_s, rest) = rest.split_once('[').ok_or_else(err)?;
        let coords_s = rest.strip_suffix(']').ok_or_else(err)?;
        let order: usize = order_s.parse().map_err(|_| err())?;
        let k: usize = k_s.parse().map_err(|_| err())?;
        let class = self
            .classes
            .class_by_order_index(order, k)
            .ok_or_else(|| format!("no subgroup class H{order}#{k}"))?;
        let coords: Vec<i64> = if coords_s.trim().is_empty() {
            Vec::new()
        } else {
            coords_s
                .split(',')
                .map(|s| s.trim().parse::<i64>().map_err(|_| err()))
                .collect::<Result<_, _>>()?
        };
        let rank = self.h2[class].rank();
        if coords.len() != rank {
            return Err(format!(
                "key H{order}#{k} needs {rank} coordinate(s), got {}",
                coords.len()
            ));
        }
        let canonical = self
            .canonical_coords(class, &coords)
            .map_err(|e| e.to_string())?;
        Ok(FusionBasisKey {
            subgroup_class: class,
            coords: canonical,
        })
    }
}

/// Counts μ-regular conjugacy classes of the cochain's subgroup: an element
/// `g` is μ-regular iff `μ(g, z) = μ(z, g)` for every `z` in its centralizer.
/// Regularity is a gauge-invariant class function, so the count depends only
/// on the cohomology class of μ.
pub fn regular_class_count(mu: &Cochain2) -> Result<usize, CohomologyError> {
    let h = mu.subgroup();
    let m = mu.modulus();
    let mut rank = 0;
    for class in h.conjugacy_classes() {
        let g = class[0];
        let centralizer = h.centralizer(g)?;
        let regular = centralizer
            .members()
            .iter()
            .all(|&z| (mu.value(g, z) - mu.value(z, g)).rem_euclid(m) == 0);
        if regular {
            rank += 1;
        }
    }
    Ok(rank)
}

/// Orbit map of coordinate tuples under the normalizer of the class
/// representative: tuple → lexicographically minimal orbit member.
fn canonical_orbit_map(
    h2: &H2Group,
    class: &crate::subgroup::SubgroupClass,
) -> Result<BTreeMap<Vec<i64>, Vec<i64>>, CohomologyError> {
    let factors = h2.invariant_factors().to_vec();
    let count: usize = factors.iter().map(|&d| d as usize).product();
    if count > MAX_COORDINATE_TUPLES {
        return Err(CohomologyError::CapExceeded {
            unknowns: count,
            cap: MAX_COORDINATE_TUPLES,
        });
    }
    let tuples = h2.all_coordinate_tuples();
    if h2.rank() == 0 {
        let mut map = BTreeMap::new();
        map.insert(Vec::new(), Vec::new());
        return Ok(map);
    }
    // Mixed-radix index of a tuple; tuples are enumerated in lex order so
    // index order is lex order.
    let tuple_index = |t: &[i64]| -> usize {
        t.iter()
            .zip(&factors)
            .fold(0usize, |acc, (&v, &d)| acc * d as usize + v as usize)
    };
    // Generator images under each distinct normalizer action.
    let mut actions: Vec<Vec<Vec<i64>>> = Vec::new();
    for &n in class.normalizer.members() {
        let images: Vec<Vec<i64>> = h2
            .generators()
            .iter()
            .map(|gen| {
                let moved = gen.conjugate(n)?;
                h2.class_coordinates(&moved)
            })
            .collect::<Result<_, _>>()?;
        if !actions.contains(&images) {
            actions.push(images);
        }
    }
    // Union-find over tuple indices.
    let mut parent: Vec<usize> = (0..count).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for images in &actions {
        for (idx, tuple) in tuples.iter().enumerate() {
            let mut image = vec![0i64; factors.len()];
            for (coef, img) in tuple.iter().zip(images) {
                for (slot, (&v, &d)) in image.iter_mut().zip(img.iter().zip(&factors)) {
                    *slot = (*slot + coef * v).rem_euclid(d);
                }
            }
            let a = find(&mut parent, idx);
            let b = find(&mut parent, tuple_index(&image));
            if a != b {
                // Union by index keeps the smaller (lex-smaller) as root.
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi] = lo;
            }
        }
    }
    let mut map = BTreeMap::new();
    for (idx, tuple) in tuples.iter().enumerate() {
        let root = find(&mut parent, idx);
        map.insert(tuple.clone(), tuples[root].clone());
    }
    Ok(map)
}
