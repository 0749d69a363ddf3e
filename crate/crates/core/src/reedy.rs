//! Diagrams of chain complexes over finite categories and the Reedy
//! machinery over direct indexing categories.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::chain::{
    direct_sum, factorize_kernel_cone, pushout, pushout_along_cofibration, ChainComplex, ChainMap, Degree, DirectSum,
    ExactFunctor, QuotientComplex,
};
use crate::error::{Error, Result};
use crate::fincat::{direct_structure, is_sieve, latching_shape, CatFunctor, FinCategory, LatchingShape, MorId, ObjId};
use crate::linalg::Matrix;

/// A functor `I -> Ch(F_p)` given by its values on every object and morphism.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainDiagram {
    pub index: Arc<FinCategory>,
    pub objects: Vec<Arc<ChainComplex>>,
    pub maps: Vec<ChainMap>,
}

impl fmt::Debug for ChainDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<_> = self.objects.iter().map(|x| x.dims().clone()).collect();
        write!(f, "ChainDiagram[{} objects; {:?}]", self.index.num_objects(), dims)
    }
}

impl ChainDiagram {
    pub fn new(index: Arc<FinCategory>, objects: Vec<Arc<ChainComplex>>, maps: Vec<ChainMap>) -> Result<Self> {
        let d = ChainDiagram { index, objects, maps };
        let v = d.violations();
        if v.is_empty() {
            Ok(d)
        } else {
            Err(Error::Precondition(v.join("; ")))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let c = &self.index;
        let mut out = Vec::new();
        if self.objects.len() != c.num_objects() || self.maps.len() != c.num_morphisms() {
            out.push("diagram size does not match its index".into());
            return out;
        }
        let p = self.prime();
        if self.objects.iter().any(|x| x.prime() != p) {
            out.push("objects live over different fields".into());
        }
        for (m, f) in self.maps.iter().enumerate() {
            if *f.source != *self.objects[c.src(m)] || *f.target != *self.objects[c.tgt(m)] {
                out.push(format!("map at {} has wrong endpoints", c.name(m)));
            } else if !f.is_valid() {
                out.push(format!("map at {} is not a chain map", c.name(m)));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for &id in c.identities() {
            if !self.maps[id].is_identity() {
                out.push(format!("identity {} is not sent to an identity", c.name(id)));
            }
        }
        for (&(g, f), &h) in c.table() {
            if self.maps[g].after(&self.maps[f]) != self.maps[h] {
                out.push(format!("composition {} ∘ {} is not preserved", c.name(g), c.name(f)));
            }
        }
        out
    }

    pub fn prime(&self) -> u32 {
        self.objects.first().map_or(2, |x| x.prime())
    }

    /// Every object sent to `x`, every morphism to the identity.
    pub fn constant(index: Arc<FinCategory>, x: Arc<ChainComplex>) -> Self {
        let objects = vec![x.clone(); index.num_objects()];
        let maps = vec![ChainMap::identity(x); index.num_morphisms()];
        ChainDiagram { index, objects, maps }
    }

    /// The diagram on `[n]` determined by consecutive maps `X_0 -> ... -> X_n`.
    pub fn from_sequence(maps: &[ChainMap]) -> Result<Self> {
        let Some(first) = maps.first() else {
            return Err(Error::Precondition("a sequence needs at least one map".into()));
        };
        for w in maps.windows(2) {
            if *w[0].target != *w[1].source {
                return Err(Error::Precondition("sequence maps are not composable".into()));
            }
        }
        let n = maps.len();
        let index = Arc::new(FinCategory::chain(n));
        let mut objects = vec![first.source.clone()];
        objects.extend(maps.iter().map(|f| f.target.clone()));
        let values = (0..index.num_morphisms())
            .map(|m| {
                let (a, b) = (index.src(m), index.tgt(m));
                maps[a..b].iter().fold(ChainMap::identity(objects[a].clone()), |acc, f| f.after(&acc))
            })
            .collect();
        ChainDiagram::new(index, objects, values)
    }

    /// `X ∘ F` for `F: J -> I`.
    pub fn restrict(&self, f: &CatFunctor) -> Result<Self> {
        if *f.target != *self.index {
            return Err(Error::Precondition("functor does not land in the diagram's index".into()));
        }
        let objects = f.obj_map.iter().map(|&o| self.objects[o].clone()).collect();
        let maps = f.mor_map.iter().map(|&m| self.maps[m].clone()).collect();
        Ok(ChainDiagram { index: f.source.clone(), objects, maps })
    }

    /// Weak equivalences of the index (isomorphisms if none are designated)
    /// sent to maps that are not quasi-isomorphisms.
    pub fn non_homotopical(&self) -> Vec<MorId> {
        let w = self.index.weq_or_isos();
        w.iter().filter(|&m| !self.index.is_identity(m) && !self.maps[m].is_quasi_isomorphism()).collect()
    }

    pub fn is_homotopical(&self) -> bool {
        self.non_homotopical().is_empty()
    }

    pub fn apply_exact(&self, functor: ExactFunctor) -> ChainDiagram {
        let objects: Vec<Arc<ChainComplex>> = self.objects.iter().map(|x| Arc::new(functor.on_complex(x))).collect();
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(m, f)| functor.on_map(f, objects[self.index.src(m)].clone(), objects[self.index.tgt(m)].clone()))
            .collect();
        ChainDiagram { index: self.index.clone(), objects, maps }
    }

    pub fn latching(&self, i: ObjId) -> Latching {
        let map = |m: MorId| self.maps[m].clone();
        Latching::build(&self.index, i, &|o| self.objects[o].clone(), &map, &map, self.objects[i].clone())
    }
}

/// `pushforward_exact`: apply an exact functor objectwise.
pub fn pushforward_exact(functor: ExactFunctor, x: &ChainDiagram) -> ChainDiagram {
    x.apply_exact(functor)
}

/// A natural transformation between diagrams on the same index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramMap {
    pub source: Arc<ChainDiagram>,
    pub target: Arc<ChainDiagram>,
    pub components: Vec<ChainMap>,
}

impl DiagramMap {
    pub fn new(source: Arc<ChainDiagram>, target: Arc<ChainDiagram>, components: Vec<ChainMap>) -> Result<Self> {
        let f = DiagramMap { source, target, components };
        match f.violations().first() {
            None => Ok(f),
            Some(v) => Err(Error::Precondition(v.clone())),
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let c = &self.source.index;
        if **c != *self.target.index {
            return vec!["diagrams have different indices".into()];
        }
        if self.components.len() != c.num_objects() {
            return vec!["wrong number of components".into()];
        }
        let mut out = Vec::new();
        for (o, f) in self.components.iter().enumerate() {
            if *f.source != *self.source.objects[o] || *f.target != *self.target.objects[o] || !f.is_valid() {
                out.push(format!("component at {} is not a chain map between the values", c.object_name(o)));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for m in 0..c.num_morphisms() {
            let (a, b) = (c.src(m), c.tgt(m));
            if self.target.maps[m].after(&self.components[a]) != self.components[b].after(&self.source.maps[m]) {
                out.push(format!("naturality fails at {}", c.name(m)));
            }
        }
        out
    }

    pub fn identity(x: Arc<ChainDiagram>) -> Self {
        let components = x.objects.iter().map(|o| ChainMap::identity(o.clone())).collect();
        DiagramMap { source: x.clone(), target: x, components }
    }

    pub fn non_weq_objects(&self) -> Vec<ObjId> {
        (0..self.components.len()).filter(|&o| !self.components[o].is_quasi_isomorphism()).collect()
    }

    pub fn is_levelwise_weq(&self) -> bool {
        self.non_weq_objects().is_empty()
    }

    pub fn restrict(&self, f: &CatFunctor) -> Result<DiagramMap> {
        let source = Arc::new(self.source.restrict(f)?);
        let target = Arc::new(self.target.restrict(f)?);
        let components = f.obj_map.iter().map(|&o| self.components[o].clone()).collect();
        Ok(DiagramMap { source, target, components })
    }
}

/// `L_i X` as a quotient of `⊕_{u: j -> i} X_j` by the arrows of the
/// latching category, with its cocone and the latching map `L_i X -> X_i`.
#[derive(Clone, Debug)]
pub struct Latching {
    pub object: Arc<ChainComplex>,
    pub shape: LatchingShape,
    /// `λ_u: X_j -> L_i X` for every `u` in `shape.objects`.
    pub cocone: Vec<ChainMap>,
    pub map: ChainMap,
    sum: DirectSum,
    quotient: QuotientComplex,
}

impl Latching {
    /// `legs(u)` is the map `X_{src u} -> target` the latching map is
    /// induced from; the rest of the diagram is read through `obj` and `map`
    /// on objects below `i`.
    pub(crate) fn build(
        c: &FinCategory,
        i: ObjId,
        obj: &dyn Fn(ObjId) -> Arc<ChainComplex>,
        map: &dyn Fn(MorId) -> ChainMap,
        legs: &dyn Fn(MorId) -> ChainMap,
        target: Arc<ChainComplex>,
    ) -> Latching {
        let shape = latching_shape(c, i);
        let p = target.prime();
        let parts: Vec<Arc<ChainComplex>> = shape.objects.iter().map(|&u| obj(c.src(u))).collect();
        let sum = direct_sum(p, &parts);
        let mut relations: BTreeMap<Degree, Matrix> = BTreeMap::new();
        for &(a, b, h) in &shape.arrows {
            let r = sum.injections[a].add(&sum.injections[b].after(&map(h)).scale(p - 1));
            for n in r.source.degrees() {
                let block = r.block(n);
                relations.entry(n).and_modify(|m| *m = m.hstack(&block)).or_insert(block);
            }
        }
        let quotient = QuotientComplex::new(&sum.object, &relations);
        let cocone: Vec<ChainMap> = sum.injections.iter().map(|inj| quotient.projection.after(inj)).collect();
        let total = shape
            .objects
            .iter()
            .enumerate()
            .map(|(k, &u)| legs(u).after(&sum.projections[k]))
            .fold(ChainMap::zero(sum.object.clone(), target.clone()), |acc, g| acc.add(&g));
        let latch = quotient.descend(&total);
        Latching { object: quotient.object.clone(), shape, cocone, map: latch, sum, quotient }
    }

    /// The map `L_i X -> T` induced by a compatible family `X_{j_u} -> T`.
    pub fn induced(&self, family: &[ChainMap], target: &Arc<ChainComplex>) -> ChainMap {
        let total = family
            .iter()
            .enumerate()
            .map(|(k, g)| g.after(&self.sum.projections[k]))
            .fold(ChainMap::zero(self.sum.object.clone(), target.clone()), |acc, g| acc.add(&g));
        self.quotient.descend(&total)
    }

    /// Position of a morphism in the latching shape.
    pub fn position(&self, u: MorId) -> Option<usize> {
        self.shape.objects.iter().position(|&v| v == u)
    }
}

/// Objects (in degree order) whose latching maps are not cofibrations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReedyStatus {
    pub failures: Vec<ObjId>,
}

impl ReedyStatus {
    pub fn is_cofibrant(&self) -> bool {
        self.failures.is_empty()
    }
}

fn degree_order(c: &FinCategory) -> Result<Vec<ObjId>> {
    direct_structure(c).map(|d| d.order()).map_err(|w| Error::NotDirect(format!("{w:?}")))
}

pub fn reedy_status(x: &ChainDiagram) -> Result<ReedyStatus> {
    let order = degree_order(&x.index)?;
    let failures = order.into_iter().filter(|&i| !x.latching(i).map.is_cofibration()).collect();
    Ok(ReedyStatus { failures })
}

/// The relative latching maps `X_i ⊔_{L_i X} L_i Y -> Y_i` of `f: X -> Y`.
pub fn relative_latching_map(f: &DiagramMap, i: ObjId) -> Result<ChainMap> {
    let (lx, ly) = (f.source.latching(i), f.target.latching(i));
    let c = &f.source.index;
    let family: Vec<ChainMap> =
        lx.shape.objects.iter().enumerate().map(|(k, &u)| ly.cocone[k].after(&f.components[c.src(u)])).collect();
    let lf = lx.induced(&family, &ly.object);
    let square = pushout(&lx.map, &lf)?;
    Ok(square.induced(&f.components[i], &ly.map))
}

/// Objects where the relative latching map of `f` is not a cofibration.
pub fn reedy_cofibration_status(f: &DiagramMap) -> Result<ReedyStatus> {
    let order = degree_order(&f.source.index)?;
    let mut failures = Vec::new();
    for i in order {
        if !relative_latching_map(f, i)?.is_cofibration() {
            failures.push(i);
        }
    }
    Ok(ReedyStatus { failures })
}

/// A colimit with its cocone `X_i -> colim`.
#[derive(Clone, Debug)]
pub struct DiagramColimit {
    pub object: Arc<ChainComplex>,
    pub cocone: Vec<ChainMap>,
}

/// Colimit of a Reedy cofibrant diagram, attaching one object at a time in
/// degree order by a pushout along its latching map.
pub fn reedy_colimit(x: &ChainDiagram) -> Result<DiagramColimit> {
    let status = reedy_status(x)?;
    if let Some(&i) = status.failures.first() {
        return Err(Error::NotReedyCofibrant(i));
    }
    let c = &x.index;
    let p = x.prime();
    let mut object = Arc::new(ChainComplex::zero(p));
    let mut cocone: Vec<Option<ChainMap>> = vec![None; c.num_objects()];
    for i in degree_order(c)? {
        let lat = x.latching(i);
        let family: Vec<ChainMap> =
            lat.shape.objects.iter().map(|&u| cocone[c.src(u)].clone().expect("lower degree")).collect();
        let g = lat.induced(&family, &object);
        let square = pushout_along_cofibration(&lat.map, &g)?;
        for leg in cocone.iter_mut().flatten() {
            *leg = square.from_c.after(leg);
        }
        cocone[i] = Some(square.from_b.clone());
        object = square.object.clone();
    }
    Ok(DiagramColimit { object, cocone: cocone.into_iter().map(Option::unwrap).collect() })
}

/// Colimit as the coequalizer of `⊕_m X_{src m} ⇉ ⊕_i X_i`.
pub fn coequalizer_colimit(x: &ChainDiagram) -> (DiagramColimit, QuotientComplex, DirectSum) {
    let c = &x.index;
    let p = x.prime();
    let sum = direct_sum(p, &x.objects);
    let mut relations: BTreeMap<Degree, Matrix> = BTreeMap::new();
    for m in (0..c.num_morphisms()).filter(|&m| !c.is_identity(m)) {
        let r = sum.injections[c.tgt(m)].after(&x.maps[m]).add(&sum.injections[c.src(m)].scale(p - 1));
        for n in r.source.degrees() {
            let block = r.block(n);
            relations.entry(n).and_modify(|acc| *acc = acc.hstack(&block)).or_insert(block);
        }
    }
    let quotient = QuotientComplex::new(&sum.object, &relations);
    let cocone = sum.injections.iter().map(|inj| quotient.projection.after(inj)).collect();
    (DiagramColimit { object: quotient.object.clone(), cocone }, quotient, sum)
}

/// Compares two colimits of `x` by inducing the map from the coequalizer
/// presentation; they agree iff it is an isomorphism under both cocones.
pub fn colimits_agree(x: &ChainDiagram, other: &DiagramColimit) -> bool {
    let (brute, quotient, sum) = coequalizer_colimit(x);
    let total = other
        .cocone
        .iter()
        .enumerate()
        .map(|(k, g)| g.after(&sum.projections[k]))
        .fold(ChainMap::zero(sum.object.clone(), other.object.clone()), |acc, g| acc.add(&g));
    let comparison = quotient.descend(&total);
    comparison.is_isomorphism() && brute.cocone.iter().zip(&other.cocone).all(|(b, o)| comparison.after(b) == *o)
}

/// `X̂` with `g: X̂ -> X`.
#[derive(Clone, Debug)]
pub struct Replacement {
    pub diagram: Arc<ChainDiagram>,
    pub map: DiagramMap,
}

/// Extends a Reedy cofibrant homotopical `H` on a sieve `I ⊆ J` with a
/// levelwise weak equivalence `f: H -> X|_I` to a Reedy cofibrant homotopical
/// `X̂` on `J` with `g: X̂ -> X` restricting to `f`.
///
/// Objects outside the sieve are built in degree order by factoring the map
/// `L_j X̂ -> X_j` through the kernel cone. Where that map is injective no
/// factorization is needed, so a Reedy cofibrant `X` with `f = id` comes back
/// unchanged.
pub fn reedy_replace_rel(
    x: &ChainDiagram,
    sieve: &CatFunctor,
    h: &ChainDiagram,
    f: &DiagramMap,
) -> Result<Replacement> {
    let j = x.index.clone();
    if *sieve.target != *j || *sieve.source != *h.index {
        return Err(Error::Precondition("sieve does not match the diagrams".into()));
    }
    if !is_sieve(sieve)? {
        return Err(Error::Precondition("inclusion is not a sieve".into()));
    }
    if let Some(&m) = x.non_homotopical().first() {
        return Err(Error::NotHomotopical(m));
    }
    if *f.source != *h || *f.target != x.restrict(sieve)? {
        return Err(Error::Precondition("map does not go from H to the restriction of X".into()));
    }
    if let Some(v) = f.violations().first() {
        return Err(Error::Precondition(v.clone()));
    }
    if let Some(&o) = f.non_weq_objects().first() {
        return Err(Error::NotWeakEquivalence(format!("component at {}", h.index.object_name(o))));
    }
    if let Some(&o) = reedy_status(h)?.failures.first() {
        return Err(Error::NotReedyCofibrant(o));
    }

    let order = degree_order(&j)?;
    let mut in_sieve = vec![None; j.num_objects()];
    for (k, &o) in sieve.obj_map.iter().enumerate() {
        in_sieve[o] = Some(k);
    }
    let mut sieve_mor = vec![None; j.num_morphisms()];
    for (k, &m) in sieve.mor_map.iter().enumerate() {
        sieve_mor[m] = Some(k);
    }
    let mut objects: Vec<Option<Arc<ChainComplex>>> = vec![None; j.num_objects()];
    let mut g: Vec<Option<ChainMap>> = vec![None; j.num_objects()];
    let mut maps: Vec<Option<ChainMap>> = vec![None; j.num_morphisms()];
    for &o in &order {
        if let Some(k) = in_sieve[o] {
            objects[o] = Some(h.objects[k].clone());
            g[o] = Some(f.components[k].clone());
            for &m in j.incoming(o) {
                let k = sieve_mor[m].expect("sieves are full");
                maps[m] = Some(h.maps[k].clone());
            }
            continue;
        }
        let lat = Latching::build(
            &j,
            o,
            &|a| objects[a].clone().expect("lower degree"),
            &|m| maps[m].clone().expect("lower degree"),
            &|u| x.maps[u].after(g[j.src(u)].as_ref().unwrap()),
            x.objects[o].clone(),
        );
        let phi = lat.map.clone();
        let fac = factorize_kernel_cone(&phi);
        objects[o] = Some(fac.object.clone());
        g[o] = Some(fac.weq.clone());
        for &m in j.incoming(o) {
            maps[m] = Some(if j.is_identity(m) {
                ChainMap::identity(fac.object.clone())
            } else {
                let pos = lat.position(m).expect("non-identity arrows are latching objects");
                fac.cofibration.after(&lat.cocone[pos])
            });
        }
    }
    let diagram = Arc::new(ChainDiagram {
        index: j.clone(),
        objects: objects.into_iter().map(Option::unwrap).collect(),
        maps: maps.into_iter().map(Option::unwrap).collect(),
    });
    let map = DiagramMap {
        source: diagram.clone(),
        target: Arc::new(x.clone()),
        components: g.into_iter().map(Option::unwrap).collect(),
    };
    let out = Replacement { diagram, map };
    out.verify(x, sieve, h, f)?;
    Ok(out)
}

impl Replacement {
    /// Restriction equality, `g|_I = f`, Reedy cofibrancy, levelwise weak
    /// equivalence and homotopicality.
    pub fn verify(&self, x: &ChainDiagram, sieve: &CatFunctor, h: &ChainDiagram, f: &DiagramMap) -> Result<()> {
        let post = |msg: &str| Err(Error::Postcondition(msg.into()));
        if let Some(v) = self.diagram.violations().first() {
            return post(&format!("replacement is not a diagram: {v}"));
        }
        if *self.map.target != *x || !self.map.violations().is_empty() {
            return post("replacement map is not natural");
        }
        if self.diagram.restrict(sieve)? != *h {
            return post("replacement does not restrict to H");
        }
        if self.map.restrict(sieve)?.components != f.components {
            return post("replacement map does not restrict to f");
        }
        if !reedy_status(&self.diagram)?.is_cofibrant() {
            return post("replacement is not Reedy cofibrant");
        }
        if !self.map.is_levelwise_weq() {
            return post("replacement map is not a levelwise weak equivalence");
        }
        if !self.diagram.is_homotopical() {
            return post("replacement is not homotopical");
        }
        Ok(())
    }
}

/// The empty diagram on the empty category, the sieve `∅ -> J` and the
/// empty map: inputs for replacing with nothing fixed.
pub fn empty_sieve(x: &ChainDiagram) -> (CatFunctor, ChainDiagram, DiagramMap) {
    let empty = Arc::new(FinCategory::empty());
    let sieve = CatFunctor::new(empty.clone(), x.index.clone(), vec![], vec![]);
    let h = ChainDiagram { index: empty.clone(), objects: vec![], maps: vec![] };
    let hx = Arc::new(h.clone());
    let f = DiagramMap { source: hx.clone(), target: hx, components: vec![] };
    (sieve, h, f)
}

/// Reedy cofibrant replacement with nothing fixed.
pub fn reedy_replace(x: &ChainDiagram) -> Result<Replacement> {
    let (sieve, h, f) = empty_sieve(x);
    reedy_replace_rel(x, &sieve, &h, &f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsub::DCat;
    use crate::exec::Exec;

    const P: u32 = 2;

    fn pt() -> Arc<ChainComplex> {
        Arc::new(ChainComplex::point(P, 0))
    }

    #[test]
    fn minimal_objects_have_zero_latching() {
        let x = ChainDiagram::constant(Arc::new(FinCategory::chain(1)), pt());
        assert!(x.latching(0).object.is_zero());
        let l1 = x.latching(1);
        assert_eq!(l1.object.dims(), pt().dims());
        assert!(l1.map.is_identity());
    }

    #[test]
    fn constant_diagram_on_d1_has_fold_latching_map() {
        let d = DCat::standard(1, 1, Exec::Sequential).unwrap();
        let x = ChainDiagram::constant(d.category().clone(), pt());
        let edge = d.objects_where(|n, s| n == 1 && !d.sset().is_degenerate(1, s))[0];
        let lat = x.latching(edge);
        assert_eq!(lat.object.total_dim(), 2);
        assert!(!lat.map.is_cofibration());
        assert!(reedy_status(&x).unwrap().failures.contains(&edge));
    }

    #[test]
    fn cofibrations_over_chain_are_reedy_cofibrant() {
        let z = Arc::new(ChainComplex::zero(P));
        let two = Arc::new(ChainComplex::concentrated(P, 0, 2));
        let a = ChainMap::zero(z, pt());
        let b = ChainMap::new(pt(), two, BTreeMap::from([(0, Matrix::from_rows(P, &[vec![1], vec![0]]))])).unwrap();
        let x = ChainDiagram::from_sequence(&[a, b]).unwrap();
        assert!(reedy_status(&x).unwrap().is_cofibrant());
        let col = reedy_colimit(&x).unwrap();
        assert_eq!(col.object.total_dim(), 2);
        assert!(colimits_agree(&x, &col));
        let id = DiagramMap::identity(Arc::new(x));
        assert!(reedy_cofibration_status(&id).unwrap().is_cofibrant());
    }

    #[test]
    fn discrete_colimit_is_coproduct() {
        let x = ChainDiagram::constant(Arc::new(FinCategory::discrete(3)), pt());
        let col = reedy_colimit(&x).unwrap();
        assert_eq!(col.object.total_dim(), 3);
        assert!(colimits_agree(&x, &col));
    }

    #[test]
    fn replacing_a_constant_frame() {
        let d = DCat::standard(0, 2, Exec::Sequential).unwrap();
        let x = ChainDiagram::constant(d.category().clone(), pt());
        let r = reedy_replace(&x).unwrap();
        assert!(reedy_status(&r.diagram).unwrap().is_cofibrant());
        assert!(r.map.is_levelwise_weq());
    }

    #[test]
    fn reedy_cofibrant_input_is_kept() {
        let z = Arc::new(ChainComplex::zero(P));
        let x = ChainDiagram::from_sequence(&[ChainMap::zero(z, pt()), ChainMap::identity(pt())]).unwrap();
        let r = reedy_replace(&x).unwrap();
        assert_eq!(*r.diagram, x);
        assert!(r.map.components.iter().all(ChainMap::is_identity));
    }
}
