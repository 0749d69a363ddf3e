//! Finite categories stored as explicit composition tables.
//!
//! Objects and morphisms are addressed by dense indices ([`ObjId`],
//! [`MorId`]); names are kept only for reports and file round-trips.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::words::{Letter, Relation, Saturation, WordSystem};

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

#[derive(Clone, Debug)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    compose: HashMap<(MorId, MorId), MorId>,
    incoming: Vec<Vec<MorId>>,
    outgoing: Vec<Vec<MorId>>,
    weq: Option<MorphismClass>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.compose == other.compose
            && self.weq == other.weq
    }
}

impl Eq for FinCategory {}

impl FinCategory {
    /// Assembles a category from raw parts without checking any law.
    ///
    /// `compose` maps `(g, f)` to `g ∘ f`. Use [`validate_category`] to check
    /// the result; malformed tables are representable on purpose.
    ///
    /// # Panics
    /// If a morphism endpoint or identity refers to a missing object.
    pub fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        compose: HashMap<(MorId, MorId), MorId>,
    ) -> Self {
        let n = objects.len();
        assert_eq!(identities.len(), n, "one identity per object");
        let mut incoming = vec![Vec::new(); n];
        let mut outgoing = vec![Vec::new(); n];
        for (id, m) in morphisms.iter().enumerate() {
            assert!(m.src < n && m.tgt < n, "morphism {} has an unknown endpoint", m.name);
            outgoing[m.src].push(id);
            incoming[m.tgt].push(id);
        }
        FinCategory { objects, morphisms, identities, compose, incoming, outgoing, weq: None }
    }

    /// Builds a category from non-identity generators and a composition
    /// function; identities are created and composed automatically.
    ///
    /// `comp(g, f)` receives indices into `arrows` and must return the index
    /// of `g ∘ f`, or `None` when the composite is an identity.
    pub fn from_arrows<F>(objects: Vec<String>, arrows: Vec<Morphism>, comp: F) -> Self
    where
        F: Fn(usize, usize) -> Option<usize>,
    {
        let n_obj = objects.len();
        let n_arr = arrows.len();
        let mut morphisms = arrows;
        let mut identities = Vec::with_capacity(n_obj);
        for (o, name) in objects.iter().enumerate() {
            identities.push(morphisms.len());
            morphisms.push(Morphism { name: format!("id_{name}"), src: o, tgt: o });
        }
        let mut compose = HashMap::new();
        for g in 0..morphisms.len() {
            for f in 0..morphisms.len() {
                if morphisms[g].src != morphisms[f].tgt {
                    continue;
                }
                let h = if g >= n_arr {
                    f
                } else if f >= n_arr {
                    g
                } else {
                    match comp(g, f) {
                        Some(h) => h,
                        None => identities[morphisms[f].src],
                    }
                };
                compose.insert((g, f), h);
            }
        }
        FinCategory::from_parts(objects, morphisms, identities, compose)
    }

    /// Finite poset on `names`, with a morphism `i -> j` whenever `leq(i, j)`.
    /// `leq` must be a partial order.
    pub fn poset<F: Fn(usize, usize) -> bool>(names: Vec<String>, leq: F) -> Self {
        let n = names.len();
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && leq(i, j) {
                    index.insert((i, j), arrows.len());
                    arrows.push(Morphism { name: format!("{}->{}", names[i], names[j]), src: i, tgt: j });
                }
            }
        }
        let pairs: Vec<(usize, usize)> = arrows.iter().map(|m| (m.src, m.tgt)).collect();
        FinCategory::from_arrows(names, arrows, |g, f| {
            let (a, _) = pairs[f];
            let (_, c) = pairs[g];
            index.get(&(a, c)).copied()
        })
    }

    /// The linear order `[n] = {0 < 1 < ... < n}`.
    pub fn chain(n: usize) -> Self {
        FinCategory::poset((0..=n).map(|i| i.to_string()).collect(), |i, j| i <= j)
    }

    pub fn discrete(n: usize) -> Self {
        FinCategory::poset((0..n).map(|i| format!("x{i}")).collect(), |i, j| i == j)
    }

    pub fn empty() -> Self {
        FinCategory::discrete(0)
    }

    /// The commutative square `0 -> 1, 0 -> 2, 1 -> 3, 2 -> 3` as a poset.
    pub fn square() -> Self {
        FinCategory::poset(vec!["0".into(), "1".into(), "2".into(), "3".into()], |i, j| i == j || i == 0 || j == 3)
    }

    /// `A --a--> B <--c-- C --d--> D`, with `c` as the only non-identity
    /// weak equivalence.
    pub fn zigzag() -> Self {
        let objects = vec!["A".into(), "B".into(), "C".into(), "D".into()];
        let arrows = vec![
            Morphism { name: "a".into(), src: 0, tgt: 1 },
            Morphism { name: "c".into(), src: 2, tgt: 1 },
            Morphism { name: "d".into(), src: 2, tgt: 3 },
        ];
        let cat = FinCategory::from_arrows(objects, arrows, |_, _| None);
        let c = cat.morphism_by_name("c").unwrap();
        let mut weq = MorphismClass::identities(&cat);
        weq.insert(c);
        cat.with_weq(weq)
    }

    /// The free category on an acyclic quiver; morphisms are paths.
    pub fn free(objects: Vec<String>, arrows: Vec<Morphism>) -> Result<Self> {
        let n = objects.len();
        let mut paths: Vec<Vec<usize>> = arrows.iter().enumerate().map(|(i, _)| vec![i]).collect();
        let mut frontier = paths.clone();
        let mut guard = 0;
        while !frontier.is_empty() {
            guard += 1;
            if guard > n + 1 {
                return Err(Error::Precondition("quiver has a cycle; free category is infinite".into()));
            }
            let mut next = Vec::new();
            for p in &frontier {
                let end = arrows[*p.last().unwrap()].tgt;
                for (i, a) in arrows.iter().enumerate() {
                    if a.src == end {
                        let mut q = p.clone();
                        q.push(i);
                        next.push(q);
                    }
                }
            }
            paths.extend(next.iter().cloned());
            frontier = next;
        }
        let index: HashMap<Vec<usize>, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let morphisms: Vec<Morphism> = paths
            .iter()
            .map(|p| Morphism {
                name: p.iter().rev().map(|&i| arrows[i].name.as_str()).collect::<Vec<_>>().join("*"),
                src: arrows[p[0]].src,
                tgt: arrows[*p.last().unwrap()].tgt,
            })
            .collect();
        Ok(FinCategory::from_arrows(objects, morphisms, |g, f| {
            let mut p = paths[f].clone();
            p.extend_from_slice(&paths[g]);
            index.get(&p).copied()
        }))
    }

    pub fn with_weq(mut self, weq: MorphismClass) -> Self {
        assert_eq!(weq.universe(), self.morphisms.len(), "weak equivalences sized for another category");
        self.weq = Some(weq);
        self
    }

    pub fn without_weq(mut self) -> Self {
        self.weq = None;
        self
    }

    pub fn weq(&self) -> Option<&MorphismClass> {
        self.weq.as_ref()
    }

    /// The designated weak equivalences, or just the isomorphisms.
    pub fn weq_or_isos(&self) -> MorphismClass {
        self.weq.clone().unwrap_or_else(|| MorphismClass::isomorphisms(self))
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn name(&self, m: MorId) -> &str {
        &self.morphisms[m].name
    }

    pub fn src(&self, m: MorId) -> ObjId {
        self.morphisms[m].src
    }

    pub fn tgt(&self, m: MorId) -> ObjId {
        self.morphisms[m].tgt
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o]
    }

    pub fn identities(&self) -> &[MorId] {
        &self.identities
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identities[self.src(m)] == m
    }

    pub fn table(&self) -> &HashMap<(MorId, MorId), MorId> {
        &self.compose
    }

    /// `g ∘ f`, when the table has an entry.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.compose.get(&(g, f)).copied()
    }

    /// `g ∘ f` in a validated category.
    ///
    /// # Panics
    /// If the pair is not composable.
    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        match self.compose.get(&(g, f)) {
            Some(&h) => h,
            None => panic!("{} ∘ {} is not defined", self.name(g), self.name(f)),
        }
    }

    pub fn incoming(&self, o: ObjId) -> &[MorId] {
        &self.incoming[o]
    }

    pub fn outgoing(&self, o: ObjId) -> &[MorId] {
        &self.outgoing[o]
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> Vec<MorId> {
        self.outgoing[a].iter().copied().filter(|&m| self.tgt(m) == b).collect()
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<MorId> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// All composable pairs `(g, f)`, i.e. `src(g) == tgt(f)`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (MorId, MorId)> + '_ {
        (0..self.num_morphisms()).flat_map(move |g| self.incoming[self.src(g)].iter().map(move |&f| (g, f)))
    }

    pub fn is_isomorphism(&self, m: MorId) -> bool {
        self.inverse(m).is_some()
    }

    pub fn inverse(&self, m: MorId) -> Option<MorId> {
        let (a, b) = (self.src(m), self.tgt(m));
        self.hom(b, a)
            .into_iter()
            .find(|&n| self.compose(n, m) == Some(self.identity(a)) && self.compose(m, n) == Some(self.identity(b)))
    }
}

impl fmt::Display for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinCategory({} objects, {} morphisms)", self.num_objects(), self.num_morphisms())
    }
}

/// A set of morphisms of one category.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorphismClass {
    members: Vec<bool>,
}

impl MorphismClass {
    pub fn empty(universe: usize) -> Self {
        MorphismClass { members: vec![false; universe] }
    }

    pub fn all(c: &FinCategory) -> Self {
        MorphismClass { members: vec![true; c.num_morphisms()] }
    }

    pub fn identities(c: &FinCategory) -> Self {
        Self::from_ids(c.num_morphisms(), c.identities().iter().copied())
    }

    pub fn isomorphisms(c: &FinCategory) -> Self {
        Self::from_ids(c.num_morphisms(), (0..c.num_morphisms()).filter(|&m| c.is_isomorphism(m)))
    }

    pub fn from_ids<I: IntoIterator<Item = MorId>>(universe: usize, ids: I) -> Self {
        let mut class = Self::empty(universe);
        for m in ids {
            class.insert(m);
        }
        class
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, m: MorId) -> bool {
        self.members.get(m).copied().unwrap_or(false)
    }

    /// Returns `true` if `m` was newly added.
    pub fn insert(&mut self, m: MorId) -> bool {
        assert!(m < self.members.len(), "morphism {m} outside the class universe");
        !std::mem::replace(&mut self.members[m], true)
    }

    pub fn iter(&self) -> impl Iterator<Item = MorId> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &MorphismClass) -> bool {
        self.iter().all(|m| other.contains(m))
    }

    pub fn to_set(&self) -> BTreeSet<MorId> {
        self.iter().collect()
    }
}

/// A functor between two finite categories, given on objects and morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatFunctor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub obj_map: Vec<ObjId>,
    pub mor_map: Vec<MorId>,
}

impl CatFunctor {
    pub fn new(source: Arc<FinCategory>, target: Arc<FinCategory>, obj_map: Vec<ObjId>, mor_map: Vec<MorId>) -> Self {
        CatFunctor { source, target, obj_map, mor_map }
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let obj_map = (0..c.num_objects()).collect();
        let mor_map = (0..c.num_morphisms()).collect();
        CatFunctor { source: c.clone(), target: c, obj_map, mor_map }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &CatFunctor) -> CatFunctor {
        assert!(
            Arc::ptr_eq(&inner.target, &self.source) || *inner.target == *self.source,
            "functors are not composable"
        );
        CatFunctor {
            source: inner.source.clone(),
            target: self.target.clone(),
            obj_map: inner.obj_map.iter().map(|&o| self.obj_map[o]).collect(),
            mor_map: inner.mor_map.iter().map(|&m| self.mor_map[m]).collect(),
        }
    }

    /// Every violated functor law, rendered with names.
    pub fn violations(&self) -> Vec<String> {
        let (s, t) = (&*self.source, &*self.target);
        let mut out = Vec::new();
        if self.obj_map.len() != s.num_objects() || self.mor_map.len() != s.num_morphisms() {
            out.push("map sizes do not match the source category".into());
            return out;
        }
        if let Some(&o) = self.obj_map.iter().find(|&&o| o >= t.num_objects()) {
            out.push(format!("object image {o} out of range"));
            return out;
        }
        if let Some(&m) = self.mor_map.iter().find(|&&m| m >= t.num_morphisms()) {
            out.push(format!("morphism image {m} out of range"));
            return out;
        }
        for m in 0..s.num_morphisms() {
            let fm = self.mor_map[m];
            if t.src(fm) != self.obj_map[s.src(m)] || t.tgt(fm) != self.obj_map[s.tgt(m)] {
                out.push(format!("{} is not sent between the images of its endpoints", s.name(m)));
            }
        }
        for o in 0..s.num_objects() {
            if self.mor_map[s.identity(o)] != t.identity(self.obj_map[o]) {
                out.push(format!("identity of {} is not preserved", s.object_name(o)));
            }
        }
        for (g, f) in s.composable_pairs() {
            let Some(h) = s.compose(g, f) else { continue };
            if t.compose(self.mor_map[g], self.mor_map[f]) != Some(self.mor_map[h]) {
                out.push(format!("composite {} ∘ {} is not preserved", s.name(g), s.name(f)));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// Weak equivalences (isomorphisms when none are designated) go to weak
    /// equivalences.
    pub fn is_homotopical(&self) -> bool {
        let src_weq = self.source.weq_or_isos();
        let tgt_weq = self.target.weq_or_isos();
        let ok = src_weq.iter().all(|m| tgt_weq.contains(self.mor_map[m]));
        ok
    }

    pub fn is_fully_faithful(&self) -> bool {
        let s = &*self.source;
        for a in 0..s.num_objects() {
            for b in 0..s.num_objects() {
                let src_hom = s.hom(a, b);
                let mut images: Vec<MorId> = src_hom.iter().map(|&m| self.mor_map[m]).collect();
                images.sort_unstable();
                images.dedup();
                let tgt_hom = self.target.hom(self.obj_map[a], self.obj_map[b]);
                if images.len() != src_hom.len() || images.len() != tgt_hom.len() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.obj_map.iter().all(|o| seen.insert(*o))
    }
}

/// A single violated category law, with the offending morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawViolation {
    DuplicateObject(String),
    DuplicateMorphism(String),
    IdentityNotEndomorphism { object: String, morphism: String },
    NonComposableEntry { g: String, f: String },
    WrongEndpoints { g: String, f: String, result: String },
    MissingComposite { g: String, f: String },
    LeftIdentity { f: String },
    RightIdentity { f: String },
    Associativity { h: String, g: String, f: String },
    UnknownWeq(MorId),
}

impl fmt::Display for LawViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawViolation::DuplicateObject(o) => write!(out, "duplicate object id {o}"),
            LawViolation::DuplicateMorphism(m) => write!(out, "duplicate morphism id {m}"),
            LawViolation::IdentityNotEndomorphism { object, morphism } => {
                write!(out, "identity {morphism} of {object} is not an endomorphism of {object}")
            }
            LawViolation::NonComposableEntry { g, f } => {
                write!(out, "compose({g}, {f}) given for a non-composable pair")
            }
            LawViolation::WrongEndpoints { g, f, result } => {
                write!(out, "compose({g}, {f}) = {result} has the wrong source or target")
            }
            LawViolation::MissingComposite { g, f } => write!(out, "compose({g}, {f}) is missing"),
            LawViolation::LeftIdentity { f } => write!(out, "id ∘ {f} != {f}"),
            LawViolation::RightIdentity { f } => write!(out, "{f} ∘ id != {f}"),
            LawViolation::Associativity { h, g, f } => write!(out, "({h} ∘ {g}) ∘ {f} != {h} ∘ ({g} ∘ {f})"),
            LawViolation::UnknownWeq(m) => write!(out, "weak equivalence {m} is not a morphism"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<LawViolation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_category(c: &FinCategory) -> ValidationReport {
    let mut v = Vec::new();
    let mut seen = BTreeSet::new();
    for o in &c.objects {
        if !seen.insert(o.as_str()) {
            v.push(LawViolation::DuplicateObject(o.clone()));
        }
    }
    let mut seen = BTreeSet::new();
    for m in &c.morphisms {
        if !seen.insert(m.name.as_str()) {
            v.push(LawViolation::DuplicateMorphism(m.name.clone()));
        }
    }
    for (o, &id) in c.identities.iter().enumerate() {
        if id >= c.num_morphisms() || c.src(id) != o || c.tgt(id) != o {
            v.push(LawViolation::IdentityNotEndomorphism {
                object: c.objects[o].clone(),
                morphism: c.morphisms.get(id).map_or_else(|| id.to_string(), |m| m.name.clone()),
            });
        }
    }
    let mut entries: Vec<_> = c.compose.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
    entries.sort_unstable();
    for (g, f, h) in entries {
        if c.src(g) != c.tgt(f) {
            v.push(LawViolation::NonComposableEntry { g: c.name(g).into(), f: c.name(f).into() });
        } else if c.src(h) != c.src(f) || c.tgt(h) != c.tgt(g) {
            v.push(LawViolation::WrongEndpoints { g: c.name(g).into(), f: c.name(f).into(), result: c.name(h).into() });
        }
    }
    for (g, f) in c.composable_pairs() {
        if c.compose(g, f).is_none() {
            v.push(LawViolation::MissingComposite { g: c.name(g).into(), f: c.name(f).into() });
        }
    }
    if !v.is_empty() {
        // Identity and associativity checks need a well-formed table.
        return ValidationReport { violations: v };
    }
    for f in 0..c.num_morphisms() {
        if c.comp(c.identity(c.tgt(f)), f) != f {
            v.push(LawViolation::LeftIdentity { f: c.name(f).into() });
        }
        if c.comp(f, c.identity(c.src(f))) != f {
            v.push(LawViolation::RightIdentity { f: c.name(f).into() });
        }
    }
    for g in 0..c.num_morphisms() {
        for &f in c.incoming(c.src(g)) {
            let gf = c.comp(g, f);
            for &h in c.outgoing(c.tgt(g)) {
                if c.comp(c.comp(h, g), f) != c.comp(h, gf) {
                    v.push(LawViolation::Associativity {
                        h: c.name(h).into(),
                        g: c.name(g).into(),
                        f: c.name(f).into(),
                    });
                }
            }
        }
    }
    if let Some(w) = &c.weq {
        if w.universe() != c.num_morphisms() {
            v.push(LawViolation::UnknownWeq(w.universe()));
        }
    }
    ValidationReport { violations: v }
}

/// Product category; weak equivalences are pairs of weak equivalences when
/// both factors carry them.
pub fn product_category(c: &FinCategory, d: &FinCategory) -> FinCategory {
    let (no_d, nm_d) = (d.num_objects(), d.num_morphisms());
    let mut objects = Vec::with_capacity(c.num_objects() * no_d);
    for a in c.objects() {
        for b in d.objects() {
            objects.push(format!("({a},{b})"));
        }
    }
    let mut morphisms = Vec::with_capacity(c.num_morphisms() * nm_d);
    for f in c.morphisms() {
        for g in d.morphisms() {
            morphisms.push(Morphism {
                name: format!("({},{})", f.name, g.name),
                src: f.src * no_d + g.src,
                tgt: f.tgt * no_d + g.tgt,
            });
        }
    }
    let identities = (0..c.num_objects())
        .flat_map(|a| (0..no_d).map(move |b| (a, b)))
        .map(|(a, b)| c.identity(a) * nm_d + d.identity(b))
        .collect();
    let mut compose = HashMap::with_capacity(c.table().len() * d.table().len());
    for (&(g1, f1), &h1) in c.table() {
        for (&(g2, f2), &h2) in d.table() {
            compose.insert((g1 * nm_d + g2, f1 * nm_d + f2), h1 * nm_d + h2);
        }
    }
    let mut prod = FinCategory::from_parts(objects, morphisms, identities, compose);
    if let (Some(wc), Some(wd)) = (c.weq(), d.weq()) {
        let w = MorphismClass::from_ids(
            c.num_morphisms() * nm_d,
            wc.iter().flat_map(|f| wd.iter().map(move |g| f * nm_d + g)),
        );
        prod = prod.with_weq(w);
    }
    prod
}

/// Projection `C × D -> C` (`first = true`) or `C × D -> D`.
pub fn product_projection(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    prod: &Arc<FinCategory>,
    first: bool,
) -> CatFunctor {
    let (no_d, nm_d) = (d.num_objects(), d.num_morphisms());
    let (target, obj_map, mor_map) = if first {
        (
            c.clone(),
            (0..prod.num_objects()).map(|o| o / no_d).collect(),
            (0..prod.num_morphisms()).map(|m| m / nm_d).collect(),
        )
    } else {
        (
            d.clone(),
            (0..prod.num_objects()).map(|o| o % no_d).collect(),
            (0..prod.num_morphisms()).map(|m| m % nm_d).collect(),
        )
    };
    CatFunctor::new(prod.clone(), target, obj_map, mor_map)
}

/// Degree of each object; non-identity morphisms strictly raise it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeAssignment {
    pub degree: Vec<usize>,
}

impl DegreeAssignment {
    pub fn is_valid_for(&self, c: &FinCategory) -> bool {
        self.degree.len() == c.num_objects()
            && (0..c.num_morphisms()).all(|m| c.is_identity(m) || self.degree[c.src(m)] < self.degree[c.tgt(m)])
    }

    /// Objects sorted by degree, ties broken by index.
    pub fn order(&self) -> Vec<ObjId> {
        let mut objs: Vec<ObjId> = (0..self.degree.len()).collect();
        objs.sort_by_key(|&o| (self.degree[o], o));
        objs
    }

    pub fn max(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }
}

/// Why a category fails to be direct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotDirect {
    Endomorphism(MorId),
    Cycle(Vec<ObjId>),
}

/// Longest-path degrees over the digraph of non-identity morphisms.
pub fn direct_structure(c: &FinCategory) -> std::result::Result<DegreeAssignment, NotDirect> {
    let n = c.num_objects();
    if let Some(m) = (0..c.num_morphisms()).find(|&m| !c.is_identity(m) && c.src(m) == c.tgt(m)) {
        return Err(NotDirect::Endomorphism(m));
    }
    let mut preds: Vec<BTreeSet<ObjId>> = vec![BTreeSet::new(); n];
    for (m, mor) in c.morphisms().iter().enumerate() {
        if !c.is_identity(m) {
            preds[mor.tgt].insert(mor.src);
        }
    }
    // Kahn's algorithm; degrees are longest path lengths from sources.
    let mut indeg: Vec<usize> = preds.iter().map(BTreeSet::len).collect();
    let mut succs: Vec<Vec<ObjId>> = vec![Vec::new(); n];
    for (t, ps) in preds.iter().enumerate() {
        for &s in ps {
            succs[s].push(t);
        }
    }
    let mut degree = vec![0usize; n];
    let mut ready: Vec<ObjId> = (0..n).filter(|&o| indeg[o] == 0).collect();
    let mut done = 0;
    while let Some(o) = ready.pop() {
        done += 1;
        for &t in &succs[o] {
            degree[t] = degree[t].max(degree[o] + 1);
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.push(t);
            }
        }
    }
    if done < n {
        let mut cycle: Vec<ObjId> = (0..n).filter(|&o| indeg[o] > 0).collect();
        cycle.sort_unstable();
        return Err(NotDirect::Cycle(cycle));
    }
    Ok(DegreeAssignment { degree })
}

pub fn is_direct(c: &FinCategory) -> Option<DegreeAssignment> {
    direct_structure(c).ok()
}

/// Objects and arrows of a latching category, without materializing it.
///
/// `objects[k]` is a non-identity morphism into the base object; each arrow
/// `(from, to, h)` satisfies `objects[to] ∘ h = objects[from]`, and `h` is
/// never an identity.
#[derive(Clone, Debug)]
pub struct LatchingShape {
    pub objects: Vec<MorId>,
    pub arrows: Vec<(usize, usize, MorId)>,
}

pub fn latching_shape(c: &FinCategory, i: ObjId) -> LatchingShape {
    let objects: Vec<MorId> = c.incoming(i).iter().copied().filter(|&m| !c.is_identity(m)).collect();
    let mut arrows = Vec::new();
    for (a, &f) in objects.iter().enumerate() {
        for (b, &g) in objects.iter().enumerate() {
            for h in c.hom(c.src(f), c.src(g)) {
                if !c.is_identity(h) && c.compose(g, h) == Some(f) {
                    arrows.push((a, b, h));
                }
            }
        }
    }
    LatchingShape { objects, arrows }
}

/// The latching category at `i` with its forgetful functor into `c`.
pub fn latching_category(c: &Arc<FinCategory>, i: ObjId) -> Result<(Arc<FinCategory>, CatFunctor)> {
    if let Err(w) = direct_structure(c) {
        return Err(Error::NotDirect(format!("{w:?}")));
    }
    let shape = latching_shape(c, i);
    let objects: Vec<String> = shape.objects.iter().map(|&f| c.name(f).to_string()).collect();
    let arrows: Vec<Morphism> = shape
        .arrows
        .iter()
        .map(|&(a, b, h)| Morphism { name: format!("{}:{}->{}", c.name(h), objects[a], objects[b]), src: a, tgt: b })
        .collect();
    let index: HashMap<(usize, usize, MorId), usize> = shape.arrows.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let arrows_c = shape.arrows.clone();
    let lat = FinCategory::from_arrows(objects, arrows, |g, f| {
        let (a, _, h1) = arrows_c[f];
        let (_, b2, h2) = arrows_c[g];
        let h = c.comp(h2, h1);
        index.get(&(a, b2, h)).copied()
    });
    let obj_map = shape.objects.iter().map(|&f| c.src(f)).collect();
    let mut mor_map: Vec<MorId> = shape.arrows.iter().map(|&(_, _, h)| h).collect();
    for &f in &shape.objects {
        mor_map.push(c.identity(c.src(f)));
    }
    let lat = Arc::new(lat);
    let forget = CatFunctor::new(lat.clone(), c.clone(), obj_map, mor_map);
    Ok((lat, forget))
}

/// The full subcategory on `objs` (in that order) with its inclusion;
/// weak equivalences are restricted.
pub fn full_subcategory(c: &Arc<FinCategory>, objs: &[ObjId]) -> (Arc<FinCategory>, CatFunctor) {
    let mut new_obj = vec![usize::MAX; c.num_objects()];
    for (k, &o) in objs.iter().enumerate() {
        new_obj[o] = k;
    }
    let mut mor_map = Vec::new();
    let mut new_mor = vec![usize::MAX; c.num_morphisms()];
    let mut morphisms = Vec::new();
    for (m, mor) in c.morphisms().iter().enumerate() {
        if new_obj[mor.src] != usize::MAX && new_obj[mor.tgt] != usize::MAX {
            new_mor[m] = morphisms.len();
            mor_map.push(m);
            morphisms.push(Morphism { name: mor.name.clone(), src: new_obj[mor.src], tgt: new_obj[mor.tgt] });
        }
    }
    let identities = objs.iter().map(|&o| new_mor[c.identity(o)]).collect();
    let mut compose = HashMap::new();
    for (&(g, f), &h) in c.table() {
        if new_mor[g] != usize::MAX && new_mor[f] != usize::MAX {
            compose.insert((new_mor[g], new_mor[f]), new_mor[h]);
        }
    }
    let mut sub = FinCategory::from_parts(
        objs.iter().map(|&o| c.object_name(o).to_string()).collect(),
        morphisms,
        identities,
        compose,
    );
    if let Some(w) = c.weq() {
        sub = sub
            .with_weq(MorphismClass::from_ids(mor_map.len(), (0..mor_map.len()).filter(|&k| w.contains(mor_map[k]))));
    }
    let sub = Arc::new(sub);
    let incl = CatFunctor::new(sub.clone(), c.clone(), objs.to_vec(), mor_map);
    (sub, incl)
}

/// The generating quiver of a free category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub objects: usize,
    pub arrows: Vec<MorId>,
}

/// Non-identity morphisms that are not composites of two non-identities.
pub fn indecomposables(c: &FinCategory) -> Vec<MorId> {
    let mut decomposable = vec![false; c.num_morphisms()];
    for (g, f) in c.composable_pairs() {
        if !c.is_identity(g) && !c.is_identity(f) {
            if let Some(h) = c.compose(g, f) {
                decomposable[h] = true;
            }
        }
    }
    (0..c.num_morphisms()).filter(|&m| !c.is_identity(m) && !decomposable[m]).collect()
}

/// Returns the quiver of indecomposables iff every non-identity morphism
/// factors in exactly one way as a path of indecomposables.
pub fn is_free(c: &FinCategory) -> Option<Quiver> {
    // A finite free category has an acyclic generating quiver.
    let degrees = is_direct(c)?;
    let ind = indecomposables(c);
    let is_ind: Vec<bool> = {
        let mut v = vec![false; c.num_morphisms()];
        ind.iter().for_each(|&m| v[m] = true);
        v
    };
    // paths[m] = number of paths of indecomposables composing to m, counted
    // by splitting off the first letter; sources of higher degree go first.
    let mut order: Vec<MorId> = (0..c.num_morphisms()).filter(|&m| !c.is_identity(m)).collect();
    order.sort_by_key(|&m| std::cmp::Reverse(degrees.degree[c.src(m)]));
    let mut paths = vec![0u64; c.num_morphisms()];
    for &m in &order {
        let mut count = u64::from(is_ind[m]);
        for &e in c.outgoing(c.src(m)) {
            if !is_ind[e] {
                continue;
            }
            for &g in c.outgoing(c.tgt(e)) {
                if !c.is_identity(g) && c.tgt(g) == c.tgt(m) && c.compose(g, e) == Some(m) {
                    count = count.saturating_add(paths[g]);
                }
            }
        }
        paths[m] = count;
    }
    if order.iter().all(|&m| paths[m] == 1) {
        Some(Quiver { objects: c.num_objects(), arrows: ind })
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosureMode {
    TwoOfThree,
    TwoOfSix,
}

/// Least class containing `seed` and all identities that is closed under
/// 2-out-of-3 or 2-out-of-6.
pub fn closure_two_of_six(c: &FinCategory, seed: &MorphismClass, mode: ClosureMode) -> MorphismClass {
    closure_with(c, seed, mode, Exec::Sequential)
}

pub fn closure_with(c: &FinCategory, seed: &MorphismClass, mode: ClosureMode, exec: Exec) -> MorphismClass {
    let mut w = seed.clone();
    for &id in c.identities() {
        w.insert(id);
    }
    loop {
        let snapshot = &w;
        let found: Vec<Vec<MorId>> = exec.map_range(0..c.num_morphisms(), |g| forced_by(c, snapshot, g, mode));
        let mut changed = false;
        for m in found.into_iter().flatten() {
            changed |= w.insert(m);
        }
        if !changed {
            return w;
        }
    }
}

/// Members forced by configurations whose middle morphism is `g`.
fn forced_by(c: &FinCategory, w: &MorphismClass, g: MorId, mode: ClosureMode) -> Vec<MorId> {
    let mut out = Vec::new();
    match mode {
        ClosureMode::TwoOfThree => {
            for &f in c.incoming(c.src(g)) {
                let h = c.comp(g, f);
                let (a, b, ab) = (w.contains(f), w.contains(g), w.contains(h));
                if a as u8 + b as u8 + ab as u8 == 2 {
                    out.extend([f, g, h].into_iter().filter(|&m| !w.contains(m)));
                }
            }
        }
        ClosureMode::TwoOfSix => {
            for &f in c.incoming(c.src(g)) {
                let gf = c.comp(g, f);
                if !w.contains(gf) {
                    continue;
                }
                for &h in c.outgoing(c.tgt(g)) {
                    let hg = c.comp(h, g);
                    if w.contains(hg) {
                        let hgf = c.comp(h, gf);
                        out.extend([f, g, h, hgf].into_iter().filter(|&m| !w.contains(m)));
                    }
                }
            }
        }
    }
    out
}

/// Whether `f` is a sieve: fully faithful, and anything mapping into the
/// honest image lies in the image.
pub fn is_sieve(f: &CatFunctor) -> Result<bool> {
    if !f.is_valid() {
        return Err(Error::InvalidFunctor(f.violations().join("; ")));
    }
    if !f.is_fully_faithful() {
        return Err(Error::NotFullyFaithful("hom-set map is not bijective".into()));
    }
    let t = &*f.target;
    let mut in_image = vec![false; t.num_objects()];
    f.obj_map.iter().for_each(|&o| in_image[o] = true);
    for j in (0..t.num_objects()).filter(|&j| !in_image[j]) {
        if t.outgoing(j).iter().any(|&m| in_image[t.tgt(m)]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalizationStatus {
    Stabilized,
    Inconclusive(String),
}

/// Bounded presentation of a localization `C[W^-1]`.
#[derive(Clone, Debug)]
pub struct Localization {
    pub saturation: Saturation,
    pub status: LocalizationStatus,
    /// The localized category, present only when saturation stabilized and
    /// every composite could be resolved within the budget.
    pub category: Option<Arc<FinCategory>>,
    /// Image of each morphism of `C` in `category`.
    pub gamma: Vec<MorId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomEntry {
    pub src: String,
    pub tgt: String,
    pub count: usize,
    pub representatives: Vec<String>,
}

impl Localization {
    pub fn is_stabilized(&self) -> bool {
        self.status == LocalizationStatus::Stabilized && self.category.is_some()
    }

    /// Hom-set cardinalities with their shortest representatives.
    pub fn hom_report(&self) -> Vec<HomEntry> {
        let sys = &self.saturation.system;
        let mut out = Vec::new();
        for a in 0..sys.objects.len() {
            for b in 0..sys.objects.len() {
                let reps = self.saturation.classes_between(a, b);
                out.push(HomEntry {
                    src: sys.objects[a].clone(),
                    tgt: sys.objects[b].clone(),
                    count: reps.len(),
                    representatives: reps.iter().map(|&w| sys.render(&self.saturation.words[w])).collect(),
                });
            }
        }
        out
    }

    pub fn hom_count(&self, a: ObjId, b: ObjId) -> usize {
        self.saturation.classes_between(a, b).len()
    }
}

/// Localizes `c` at `w` by saturating zig-zag words up to `budget` letters.
pub fn localize_bounded(c: &FinCategory, w: &MorphismClass, budget: usize) -> Localization {
    let mut letters = Vec::new();
    let mut letter_of = vec![usize::MAX; c.num_morphisms()];
    for (m, mor) in c.morphisms().iter().enumerate() {
        if !c.is_identity(m) {
            letter_of[m] = letters.len();
            letters.push(Letter { name: mor.name.clone(), src: mor.src, tgt: mor.tgt });
        }
    }
    let mut inverse_of = HashMap::new();
    for m in w.iter().filter(|&m| !c.is_identity(m)) {
        let mor = c.morphism(m);
        inverse_of.insert(m, letters.len());
        letters.push(Letter { name: format!("{}^-1", mor.name), src: mor.tgt, tgt: mor.src });
    }
    let word_of = |m: MorId| if c.is_identity(m) { vec![] } else { vec![letter_of[m]] };
    let mut relations = Vec::new();
    for (g, f) in c.composable_pairs() {
        if c.is_identity(g) || c.is_identity(f) {
            continue;
        }
        relations.push(Relation::new(c.src(f), vec![letter_of[f], letter_of[g]], word_of(c.comp(g, f))));
    }
    for (&m, &inv) in &inverse_of {
        relations.push(Relation::new(c.src(m), vec![letter_of[m], inv], vec![]));
        relations.push(Relation::new(c.tgt(m), vec![inv, letter_of[m]], vec![]));
    }
    relations.sort_by(|a, b| (a.src, &a.lhs, &a.rhs).cmp(&(b.src, &b.lhs, &b.rhs)));
    let system = WordSystem { objects: c.objects().to_vec(), letters, relations };
    let saturation = system.saturate(budget);
    let (status, category) = match &saturation.status {
        crate::words::SaturationStatus::Stabilized => match saturation.to_category() {
            Ok(cat) => (LocalizationStatus::Stabilized, Some(Arc::new(cat))),
            Err(e) => (LocalizationStatus::Inconclusive(e.to_string()), None),
        },
        crate::words::SaturationStatus::Inconclusive(r) => (LocalizationStatus::Inconclusive(r.clone()), None),
    };
    let gamma = match &category {
        Some(_) => (0..c.num_morphisms())
            .map(|m| {
                let word = word_of(m);
                saturation.class_index(c.src(m), &word).expect("length-one words are always enumerated")
            })
            .collect(),
        None => Vec::new(),
    };
    Localization { saturation, status, category, gamma }
}

/// Outcome of the search for a lift of an arrow of `Ho(C)` to an object of
/// `C^[1]` up to isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialImageSearch {
    pub arrows_checked: usize,
    pub conjugations_checked: usize,
    /// `(u, alpha, beta)` with `beta ∘ γ(u) = φ ∘ alpha`, if one exists.
    pub witness: Option<(MorId, MorId, MorId)>,
}

/// Exhaustively checks whether `phi: a -> b` of the localization is
/// isomorphic, as an object of the arrow category, to `γ(u)` for an arrow
/// `u` of `c`.
pub fn search_essential_image(c: &FinCategory, loc: &Localization, phi: MorId) -> Result<EssentialImageSearch> {
    let ho = loc.category.as_ref().ok_or_else(|| Error::Inconclusive("localization did not stabilize".into()))?;
    let (a, b) = (ho.src(phi), ho.tgt(phi));
    let isos =
        |x: ObjId, y: ObjId| -> Vec<MorId> { ho.hom(x, y).into_iter().filter(|&m| ho.is_isomorphism(m)).collect() };
    let mut arrows_checked = 0;
    let mut conjugations_checked = 0;
    for u in 0..c.num_morphisms() {
        arrows_checked += 1;
        let gu = loc.gamma[u];
        for alpha in isos(c.src(u), a) {
            for beta in isos(c.tgt(u), b) {
                conjugations_checked += 1;
                if ho.comp(beta, gu) == ho.comp(phi, alpha) {
                    return Ok(EssentialImageSearch {
                        arrows_checked,
                        conjugations_checked,
                        witness: Some((u, alpha, beta)),
                    });
                }
            }
        }
    }
    Ok(EssentialImageSearch { arrows_checked, conjugations_checked, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arc(c: FinCategory) -> Arc<FinCategory> {
        Arc::new(c)
    }

    #[test]
    fn standard_categories_validate() {
        for c in [FinCategory::chain(2), FinCategory::zigzag(), FinCategory::square(), FinCategory::discrete(3)] {
            assert!(validate_category(&c).passed(), "{:?}", validate_category(&c));
        }
    }

    #[test]
    fn non_composable_entry_is_reported() {
        let c = FinCategory::chain(2);
        let mut table = c.table().clone();
        let a = c.morphism_by_name("0->1").unwrap();
        let b = c.morphism_by_name("1->2").unwrap();
        // a ∘ b is not composable (tgt b = 2 != src a = 0).
        table.insert((a, b), a);
        let bad = FinCategory::from_parts(c.objects().to_vec(), c.morphisms().to_vec(), c.identities().to_vec(), table);
        let report = validate_category(&bad);
        assert!(report.violations.contains(&LawViolation::NonComposableEntry { g: "0->1".into(), f: "1->2".into() }));
    }

    #[test]
    fn product_counts() {
        let p = product_category(&FinCategory::chain(1), &FinCategory::chain(1));
        assert_eq!((p.num_objects(), p.num_morphisms()), (4, 9));
        assert!(validate_category(&p).passed());
        let q = product_category(&FinCategory::chain(1), &FinCategory::chain(0));
        assert_eq!((q.num_objects(), q.num_morphisms()), (2, 3));
        let e = product_category(&FinCategory::empty(), &FinCategory::chain(3));
        assert_eq!((e.num_objects(), e.num_morphisms()), (0, 0));
    }

    #[test]
    fn degrees_of_chain() {
        let d = is_direct(&FinCategory::chain(3)).unwrap();
        assert_eq!(d.degree, vec![0, 1, 2, 3]);
    }

    #[test]
    fn endomorphism_is_not_direct() {
        // One object with an idempotent e.
        let c =
            FinCategory::from_arrows(vec!["x".into()], vec![Morphism { name: "e".into(), src: 0, tgt: 0 }], |_, _| {
                Some(0)
            });
        assert!(validate_category(&c).passed());
        assert_eq!(direct_structure(&c), Err(NotDirect::Endomorphism(0)));
    }

    #[test]
    fn isomorphism_pair_is_a_cycle() {
        let c = FinCategory::from_arrows(
            vec!["x".into(), "y".into()],
            vec![Morphism { name: "f".into(), src: 0, tgt: 1 }, Morphism { name: "g".into(), src: 1, tgt: 0 }],
            |_, _| None,
        );
        assert!(validate_category(&c).passed());
        assert!(matches!(direct_structure(&c), Err(NotDirect::Cycle(_))));
        assert!(c.is_isomorphism(0));
    }

    #[test]
    fn latching_of_chain_top() {
        let c = arc(FinCategory::chain(1));
        let (lat, forget) = latching_category(&c, 1).unwrap();
        assert_eq!(lat.num_objects(), 1);
        assert!(forget.is_valid());
        let (lat0, _) = latching_category(&c, 0).unwrap();
        assert_eq!(lat0.num_objects(), 0);
    }

    #[test]
    fn freeness() {
        let c = FinCategory::chain(2);
        let q = is_free(&c).unwrap();
        let names: Vec<&str> = q.arrows.iter().map(|&m| c.name(m)).collect();
        assert_eq!(names, vec!["0->1", "1->2"]);
        assert!(is_free(&FinCategory::square()).is_none());
        assert_eq!(is_free(&FinCategory::discrete(3)).unwrap().arrows, Vec::<MorId>::new());
        assert!(is_free(&FinCategory::zigzag()).is_some());
    }

    #[test]
    fn free_quiver_category_is_free() {
        let c = FinCategory::free(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                Morphism { name: "e1".into(), src: 0, tgt: 1 },
                Morphism { name: "e2".into(), src: 1, tgt: 2 },
                Morphism { name: "e3".into(), src: 0, tgt: 1 },
            ],
        )
        .unwrap();
        assert!(validate_category(&c).passed());
        // paths: e1, e2, e3, e2e1, e2e3 plus identities
        assert_eq!(c.num_morphisms(), 5 + 3);
        assert_eq!(is_free(&c).unwrap().arrows.len(), 3);
    }

    #[test]
    fn zigzag_closure_is_seed() {
        let c = FinCategory::zigzag();
        let seed = MorphismClass::from_ids(c.num_morphisms(), [c.morphism_by_name("c").unwrap()]);
        let closed = closure_two_of_six(&c, &seed, ClosureMode::TwoOfSix);
        let mut expected = MorphismClass::identities(&c);
        expected.insert(c.morphism_by_name("c").unwrap());
        assert_eq!(closed, expected);
    }

    #[test]
    fn closure_of_isomorphisms_on_chain() {
        let c = FinCategory::chain(2);
        let isos = MorphismClass::isomorphisms(&c);
        assert_eq!(closure_two_of_six(&c, &isos, ClosureMode::TwoOfSix), isos);
        let all = MorphismClass::all(&c);
        assert_eq!(closure_two_of_six(&c, &all, ClosureMode::TwoOfSix), all);
    }

    #[test]
    fn two_of_six_makes_isomorphisms_weak() {
        let c = FinCategory::from_arrows(
            vec!["x".into(), "y".into()],
            vec![Morphism { name: "f".into(), src: 0, tgt: 1 }, Morphism { name: "g".into(), src: 1, tgt: 0 }],
            |_, _| None,
        );
        let closed = closure_two_of_six(&c, &MorphismClass::empty(c.num_morphisms()), ClosureMode::TwoOfSix);
        assert_eq!(closed, MorphismClass::all(&c));
    }

    #[test]
    fn sieves() {
        let one = arc(FinCategory::chain(1));
        let pt = arc(FinCategory::chain(0));
        let at = |o: usize| CatFunctor::new(pt.clone(), one.clone(), vec![o], vec![one.identity(o)]);
        assert!(is_sieve(&at(0)).unwrap());
        assert!(!is_sieve(&at(1)).unwrap());
        // The unique functor [1] -> [0] is not fully faithful.
        let collapse = CatFunctor::new(one.clone(), pt.clone(), vec![0, 0], vec![0; 3]);
        assert!(matches!(is_sieve(&collapse), Err(Error::NotFullyFaithful(_))));
    }

    #[test]
    fn localization_of_chain_at_isos_is_chain() {
        let c = FinCategory::chain(2);
        let loc = localize_bounded(&c, &MorphismClass::isomorphisms(&c), 4);
        assert!(loc.is_stabilized());
        let ho = loc.category.as_ref().unwrap();
        assert_eq!(ho.num_morphisms(), c.num_morphisms());
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(loc.hom_count(a, b), c.hom(a, b).len());
            }
        }
    }

    #[test]
    fn inverting_the_arrow_gives_chaotic_category() {
        let c = FinCategory::chain(1);
        let loc = localize_bounded(&c, &MorphismClass::all(&c), 5);
        assert!(loc.is_stabilized());
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(loc.hom_count(a, b), 1);
            }
        }
        assert!(validate_category(loc.category.as_ref().unwrap()).passed());
    }

    #[test]
    fn zigzag_localization() {
        let c = FinCategory::zigzag();
        let loc = localize_bounded(&c, c.weq().unwrap(), 6);
        assert!(loc.is_stabilized());
        let (a, d) = (c.object_by_name("A").unwrap(), c.object_by_name("D").unwrap());
        assert_eq!(loc.hom_count(a, d), 1);
        let ho = loc.category.clone().unwrap();
        let phi = ho.hom(a, d)[0];
        let search = search_essential_image(&c, &loc, phi).unwrap();
        assert_eq!(search.witness, None);
        assert_eq!(search.arrows_checked, c.num_morphisms());
    }

    proptest! {
        #[test]
        fn closure_is_idempotent_and_monotone(n in 1usize..4, bits in proptest::collection::vec(any::<bool>(), 64)) {
            let c = FinCategory::chain(n);
            let m = c.num_morphisms();
            let s = MorphismClass::from_ids(m, (0..m).filter(|&i| bits[i]));
            let bigger = MorphismClass::from_ids(m, (0..m).filter(|&i| bits[i] || bits[i + 16]));
            for mode in [ClosureMode::TwoOfThree, ClosureMode::TwoOfSix] {
                let cl = closure_two_of_six(&c, &s, mode);
                prop_assert!(s.is_subset(&cl));
                prop_assert!(MorphismClass::identities(&c).is_subset(&cl));
                prop_assert_eq!(&closure_two_of_six(&c, &cl, mode), &cl);
                prop_assert!(cl.is_subset(&closure_two_of_six(&c, &bigger, mode)));
            }
            let cl3 = closure_two_of_six(&c, &s, ClosureMode::TwoOfThree);
            for (g, f) in c.composable_pairs() {
                let h = c.comp(g, f);
                let k = cl3.contains(f) as u8 + cl3.contains(g) as u8 + cl3.contains(h) as u8;
                prop_assert!(k != 2);
            }
        }
    }
}
