//! The thick subdivision `D(K)`, truncated at a cap.
//!
//! Objects are pairs `(n, σ)` with `σ` any n-simplex of `K` (degenerate ones
//! included) and `n <= cap`. A morphism `(m, σ) -> (n, τ)` is an injective
//! monotone `i: [m] -> [n]` with `i^* τ = σ`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fincat::{
    closure_with, product_category, CatFunctor, ClosureMode, DegreeAssignment, FinCategory, MorId, Morphism,
    MorphismClass, ObjId,
};
use crate::sset::{injections, nerve, product_sset, Chain, Keyed, SimplicialMap, TruncatedSSet};

#[derive(Clone, Debug)]
pub enum Base {
    Simplicial(Arc<TruncatedSSet>),
    /// A category, through its nerve.
    Category {
        category: Arc<FinCategory>,
        nerve: Arc<Keyed<Chain>>,
    },
}

#[derive(Clone, Debug)]
pub struct DCat {
    base: Base,
    sset: Arc<TruncatedSSet>,
    cap: usize,
    cat: Arc<FinCategory>,
    objects: Vec<(usize, usize)>,
    injections: Vec<Vec<usize>>,
    obj_index: HashMap<(usize, usize), ObjId>,
    mor_index: HashMap<(ObjId, Vec<usize>), MorId>,
    degree: DegreeAssignment,
}

fn compose_injections(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&j| outer[j]).collect()
}

fn injection_name(i: &[usize]) -> String {
    i.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
}

impl DCat {
    /// `D(K)` for a simplicial set.
    pub fn of_sset(k: Arc<TruncatedSSet>, cap: usize, exec: Exec) -> Result<DCat> {
        Self::build(Base::Simplicial(k.clone()), k, cap, exec)
    }

    /// `D(N I)` for a category, built with the nerve truncated at `cap`.
    pub fn of_category(i: Arc<FinCategory>, cap: usize, exec: Exec) -> Result<DCat> {
        let n = Arc::new(nerve(&i, cap));
        let sset = Arc::new(n.sset.clone());
        Self::build(Base::Category { category: i, nerve: n }, sset, cap, exec)
    }

    /// `D[n] = D(N[n])`.
    pub fn standard(n: usize, cap: usize, exec: Exec) -> Result<DCat> {
        Self::of_category(Arc::new(FinCategory::chain(n)), cap, exec)
    }

    fn build(base: Base, sset: Arc<TruncatedSSet>, cap: usize, exec: Exec) -> Result<DCat> {
        if cap > sset.cap() {
            return Err(Error::CapMismatch(cap, sset.cap()));
        }
        let mut objects = Vec::new();
        for n in 0..=cap {
            for s in 0..sset.count(n) {
                objects.push((n, s));
            }
        }
        let obj_index: HashMap<(usize, usize), ObjId> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let obj_names: Vec<String> = objects.iter().map(|&(n, s)| format!("({n},{})", sset.name(n, s))).collect();
        let mut morphisms = Vec::new();
        let mut injs = Vec::new();
        let mut mor_index = HashMap::new();
        let mut identities = vec![usize::MAX; objects.len()];
        for (t, &(n, tau)) in objects.iter().enumerate() {
            for m in 0..=n {
                for inj in injections(m, n) {
                    let src = obj_index[&(m, sset.restrict(n, tau, &inj))];
                    let id = morphisms.len();
                    if m == n {
                        identities[t] = id;
                    }
                    morphisms.push(Morphism {
                        name: format!("{}:{}->{}", injection_name(&inj), obj_names[src], obj_names[t]),
                        src,
                        tgt: t,
                    });
                    mor_index.insert((t, inj.clone()), id);
                    injs.push(inj);
                }
            }
        }
        let mut incoming = vec![Vec::new(); objects.len()];
        for (id, m) in morphisms.iter().enumerate() {
            incoming[m.tgt].push(id);
        }
        let mut compose = HashMap::new();
        for (g, mg) in morphisms.iter().enumerate() {
            for &f in &incoming[mg.src] {
                let h = compose_injections(&injs[g], &injs[f]);
                compose.insert((g, f), mor_index[&(mg.tgt, h)]);
            }
        }
        let cat = FinCategory::from_parts(obj_names, morphisms, identities, compose);
        let degree = DegreeAssignment { degree: objects.iter().map(|&(n, _)| n).collect() };
        let mut d =
            DCat { base, sset, cap, cat: Arc::new(cat), objects, injections: injs, obj_index, mor_index, degree };
        let weq = d_weak_equivalences(&d, exec)?;
        d.cat = Arc::new((*d.cat).clone().with_weq(weq));
        Ok(d)
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn sset(&self) -> &Arc<TruncatedSSet> {
        &self.sset
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.cat
    }

    pub fn weq(&self) -> &MorphismClass {
        self.cat.weq().expect("subdivisions always carry weak equivalences")
    }

    pub fn degree(&self) -> &DegreeAssignment {
        &self.degree
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    /// `(dimension, simplex)` of an object.
    pub fn object(&self, o: ObjId) -> (usize, usize) {
        self.objects[o]
    }

    pub fn object_of(&self, dim: usize, simplex: usize) -> Option<ObjId> {
        self.obj_index.get(&(dim, simplex)).copied()
    }

    pub fn injection(&self, m: MorId) -> &[usize] {
        &self.injections[m]
    }

    /// The morphism into `target` given by `injection`.
    pub fn morphism_of(&self, target: ObjId, injection: &[usize]) -> Option<MorId> {
        self.mor_index.get(&(target, injection.to_vec())).copied()
    }

    /// Objects whose simplex satisfies `pred`, in index order.
    pub fn objects_where<P: Fn(usize, usize) -> bool>(&self, pred: P) -> Vec<ObjId> {
        (0..self.objects.len()).filter(|&o| pred(self.objects[o].0, self.objects[o].1)).collect()
    }

    /// The simplex of `K` a chain `x_0 -> ... -> x_n` of `D(K)` is sent to:
    /// `f^* σ_n` where `f(j)` is the image of the top vertex of `[k_j]` in
    /// `[k_n]`.
    pub fn p_simplicial(&self, start: ObjId, chain: &[MorId]) -> (usize, usize) {
        let mut cur = start;
        for &m in chain {
            assert_eq!(self.cat.src(m), cur, "not a composable chain");
            cur = self.cat.tgt(m);
        }
        let (kn, sigma) = self.objects[cur];
        let n = chain.len();
        let mut f = vec![kn; n + 1];
        // Walk backwards, pushing the top vertex of each [k_j] forward.
        let mut into_top: Vec<usize> = (0..=kn).collect();
        for j in (0..n).rev() {
            into_top = compose_injections(&into_top, &self.injections[chain[j]]);
            f[j] = *into_top.last().unwrap();
        }
        (n, self.sset.restrict(kn, sigma, &f))
    }

    /// The edge `p(m)` of `K` for a single morphism.
    pub fn p_edge(&self, m: MorId) -> usize {
        self.p_simplicial(self.cat.src(m), &[m]).1
    }

    /// `p` as a simplicial map `N(D K) -> K`, both truncated at `nerve_cap`.
    pub fn p_simplicial_map(&self, nerve_cap: usize) -> (Keyed<Chain>, SimplicialMap) {
        let nd = nerve(&self.cat, nerve_cap);
        let maps = nd
            .keys
            .iter()
            .map(|chains| chains.iter().map(|ch| self.p_simplicial(ch.start, &ch.arrows).1).collect())
            .collect();
        let target = Arc::new(self.sset.truncate(nerve_cap));
        let f = SimplicialMap { source: Arc::new(nd.sset.clone()), target, maps };
        (nd, f)
    }

    /// `p: D I -> I` for a category base: `X ↦ X(m)` on objects and
    /// `i ↦ Y(i(m) -> n)` on morphisms.
    pub fn p_categorical(&self) -> Result<CatFunctor> {
        let Base::Category { category, nerve } = &self.base else {
            return Err(Error::Precondition("p is categorical only over a category".into()));
        };
        let end = |ch: &Chain| ch.arrows.last().map_or(ch.start, |&m| category.tgt(m));
        let obj_map = self.objects.iter().map(|&(n, s)| end(nerve.key(n, s))).collect();
        let mor_map = (0..self.cat.num_morphisms())
            .map(|m| {
                let (n, tau) = self.objects[self.cat.tgt(m)];
                let i = &self.injections[m];
                let edge = nerve.key(1, self.sset.restrict(n, tau, &[*i.last().unwrap(), n]));
                edge.arrows[0]
            })
            .collect();
        Ok(CatFunctor::new(self.cat.clone(), category.clone(), obj_map, mor_map))
    }
}

/// Weak equivalences of `D(K)`: the 2-out-of-6 closure of the morphisms
/// whose `p`-image is degenerate. Over a category the result is checked
/// against the morphisms whose `p`-image is an isomorphism.
pub fn d_weak_equivalences(d: &DCat, exec: Exec) -> Result<MorphismClass> {
    let c = &d.cat;
    let seed = MorphismClass::from_ids(
        c.num_morphisms(),
        (0..c.num_morphisms()).filter(|&m| d.sset.is_degenerate(1, d.p_edge(m))),
    );
    let closed = closure_with(c, &seed, ClosureMode::TwoOfSix, exec);
    if let Base::Category { category, .. } = &d.base {
        let p = d.p_categorical()?;
        let by_iso = MorphismClass::from_ids(
            c.num_morphisms(),
            (0..c.num_morphisms()).filter(|&m| category.is_isomorphism(p.mor_map[m])),
        );
        if by_iso != closed {
            let m = (0..c.num_morphisms()).find(|&m| by_iso.contains(m) != closed.contains(m)).unwrap();
            return Err(Error::Postcondition(format!("closure and p-isomorphism criterion disagree on {}", c.name(m))));
        }
    }
    Ok(closed)
}

/// `D(f)`: `(n, σ) ↦ (n, f σ)`, same injections.
pub fn d_of_map(f: &SimplicialMap, source: &DCat, target: &DCat) -> Result<CatFunctor> {
    if source.cap != target.cap {
        return Err(Error::CapMismatch(source.cap, target.cap));
    }
    if *f.source != *source.sset || *f.target != *target.sset {
        return Err(Error::Precondition("map endpoints do not match the subdivisions".into()));
    }
    let obj_map: Vec<ObjId> = source.objects.iter().map(|&(n, s)| target.obj_index[&(n, f.apply(n, s))]).collect();
    let mor_map = (0..source.cat.num_morphisms())
        .map(|m| target.mor_index[&(obj_map[source.cat.tgt(m)], source.injections[m].clone())])
        .collect();
    let functor = CatFunctor::new(source.cat.clone(), target.cat.clone(), obj_map, mor_map);
    if !functor.is_homotopical() {
        return Err(Error::Postcondition("D(f) is not homotopical".into()));
    }
    Ok(functor)
}

/// `i: [n] -> D[n]`, `a ↦ ([a] ↪ [n])`.
pub fn frame_embedding_i(d: &DCat) -> Result<CatFunctor> {
    let Base::Category { category, nerve } = &d.base else {
        return Err(Error::Precondition("the embedding is defined on D[n]".into()));
    };
    let n = category.num_objects() - 1;
    if *category.as_ref() != FinCategory::chain(n) {
        return Err(Error::Precondition("base category is not a linear order".into()));
    }
    if d.cap < n {
        return Err(Error::CapMismatch(d.cap, n));
    }
    let step = |a: usize| category.morphism_by_name(&format!("{a}->{}", a + 1)).unwrap();
    let obj_map: Vec<ObjId> = (0..=n)
        .map(|a| {
            let ch = Chain { start: 0, arrows: (0..a).map(step).collect() };
            d.obj_index[&(a, nerve.id(a, &ch).unwrap())]
        })
        .collect();
    let mor_map = (0..category.num_morphisms())
        .map(|m| {
            let (a, b) = (category.src(m), category.tgt(m));
            d.mor_index[&(obj_map[b], (0..=a).collect())]
        })
        .collect();
    Ok(CatFunctor::new(category.clone(), d.cat.clone(), obj_map, mor_map))
}

/// `D(K × L) -> DK × DL` with everything needed to use it.
#[derive(Clone, Debug)]
pub struct ProjectionComparison {
    pub dkl: DCat,
    pub dk: DCat,
    pub dl: DCat,
    pub product: Arc<FinCategory>,
    pub functor: CatFunctor,
}

/// `(n, (σ, τ)) ↦ ((n, σ), (n, τ))`.
pub fn projection_comparison(
    k: &Arc<TruncatedSSet>,
    l: &Arc<TruncatedSSet>,
    dk: DCat,
    dl: DCat,
    exec: Exec,
) -> Result<ProjectionComparison> {
    let cap = dk.cap;
    if dl.cap != cap {
        return Err(Error::CapMismatch(cap, dl.cap));
    }
    let kl = product_sset(&k.truncate(cap), &l.truncate(cap))?;
    let dkl = DCat::of_sset(Arc::new(kl.sset.clone()), cap, exec)?;
    let product = Arc::new(product_category(&dk.cat, &dl.cat));
    let (no_l, nm_l) = (dl.num_objects(), dl.cat.num_morphisms());
    let obj_map: Vec<ObjId> = dkl
        .objects
        .iter()
        .map(|&(n, s)| {
            let (x, y) = kl.keys[n][s];
            dk.obj_index[&(n, x)] * no_l + dl.obj_index[&(n, y)]
        })
        .collect();
    let mor_map = (0..dkl.cat.num_morphisms())
        .map(|m| {
            let t = obj_map[dkl.cat.tgt(m)];
            let inj = dkl.injections[m].clone();
            dk.mor_index[&(t / no_l, inj.clone())] * nm_l + dl.mor_index[&(t % no_l, inj)]
        })
        .collect();
    let functor = CatFunctor::new(dkl.cat.clone(), product.clone(), obj_map, mor_map);
    if !functor.is_homotopical() {
        return Err(Error::Postcondition("comparison functor is not homotopical".into()));
    }
    Ok(ProjectionComparison { dkl, dk, dl, product, functor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{is_direct, is_sieve, latching_shape, validate_category};
    use crate::sset::delta;

    fn d_of(k: TruncatedSSet, cap: usize) -> DCat {
        DCat::of_sset(Arc::new(k), cap, Exec::Sequential).unwrap()
    }

    #[test]
    fn small_counts() {
        let d0 = d_of(delta(0, 1).sset, 1);
        assert_eq!(d0.num_objects(), 2);
        let non_id = (0..d0.cat.num_morphisms()).filter(|&m| !d0.cat.is_identity(m)).count();
        assert_eq!(non_id, 2);
        assert_eq!(d0.weq(), &MorphismClass::all(&d0.cat));
        assert_eq!(d_of(delta(1, 1).sset, 1).num_objects(), 5);
        assert_eq!(d_of(TruncatedSSet::empty(2), 2).num_objects(), 0);
    }

    #[test]
    fn subdivisions_are_valid_and_direct() {
        for d in [d_of(delta(1, 2).sset, 2), DCat::standard(2, 3, Exec::Sequential).unwrap()] {
            assert!(validate_category(&d.cat).passed());
            let deg = is_direct(&d.cat).unwrap();
            assert!(d.degree.is_valid_for(&d.cat));
            assert!(deg.is_valid_for(&d.cat));
            for o in 0..d.num_objects() {
                let shape = latching_shape(&d.cat, o);
                assert!(shape.objects.iter().all(|&f| d.degree.degree[d.cat.src(f)] < d.degree.degree[o]));
            }
        }
    }

    #[test]
    fn interval_weak_equivalences() {
        let d = d_of(delta(1, 1).sset, 1);
        let s = &d.sset;
        let edge = d.object_of(1, s.find(1, "01").unwrap()).unwrap();
        let zero = d.morphism_of(edge, &[0]).unwrap();
        let one = d.morphism_of(edge, &[1]).unwrap();
        assert!(d.weq().contains(one));
        assert!(!d.weq().contains(zero));
        assert_eq!(s.name(1, d.p_edge(zero)), "01");
        assert_eq!(s.name(1, d.p_edge(one)), "11");
        let id = d.cat.identity(edge);
        assert_eq!(s.name(1, d.p_edge(id)), "11");
    }

    #[test]
    fn p_is_simplicial_and_matches_categorical_form() {
        for n in 1..=2 {
            let d = DCat::standard(n, 3, Exec::Sequential).unwrap();
            let (_, p) = d.p_simplicial_map(2);
            assert!(p.violations().is_empty(), "{:?}", p.violations());
            // On edges, p of a morphism is the nerve edge of p_categorical.
            let pc = d.p_categorical().unwrap();
            assert!(pc.is_valid());
            let Base::Category { nerve, .. } = d.base() else { unreachable!() };
            for m in 0..d.cat.num_morphisms() {
                assert_eq!(nerve.key(1, d.p_edge(m)).arrows, vec![pc.mor_map[m]]);
            }
        }
    }

    #[test]
    fn unfolding_p_on_the_arrow() {
        let d = DCat::standard(1, 1, Exec::Sequential).unwrap();
        let p = d.p_categorical().unwrap();
        let i = frame_embedding_i(&d).unwrap();
        let top = i.obj_map[1];
        assert_eq!(p.obj_map[top], 1);
        let zero_incl = d.morphism_of(top, &[0]).unwrap();
        assert_eq!(p.target.name(p.mor_map[zero_incl]), "0->1");
    }

    #[test]
    fn embedding_is_a_section_of_p() {
        for n in 0..=3 {
            let d = DCat::standard(n, 3, Exec::Sequential).unwrap();
            let i = frame_embedding_i(&d).unwrap();
            assert!(i.is_valid());
            let pi = d.p_categorical().unwrap().after(&i);
            assert_eq!(pi.obj_map, (0..=n).collect::<Vec<_>>());
            assert_eq!(pi.mor_map, (0..pi.source.num_morphisms()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn weq_criteria_agree_on_zigzag() {
        let d = DCat::of_category(Arc::new(FinCategory::zigzag().without_weq()), 3, Exec::Parallel).unwrap();
        assert!(d.weq().len() >= d.num_objects());
    }

    #[test]
    fn maps_induce_sieves_and_homotopical_functors() {
        let d1 = delta(1, 1);
        let pt = delta(0, 1);
        let (dd1, dpt) = (d_of(d1.sset.clone(), 1), d_of(pt.sset.clone(), 1));
        let collapse = SimplicialMap::new(
            Arc::new(d1.sset.clone()),
            Arc::new(pt.sset.clone()),
            (0..=1).map(|n| vec![0; d1.sset.count(n)]).collect(),
        )
        .unwrap();
        let dc = d_of_map(&collapse, &dd1, &dpt).unwrap();
        let image: std::collections::BTreeSet<usize> = dc.obj_map.iter().copied().collect();
        assert_eq!(image.len(), 2);
        let vertex = SimplicialMap::new(
            Arc::new(pt.sset.clone()),
            Arc::new(d1.sset.clone()),
            vec![vec![d1.index[0][&vec![0]]], vec![d1.index[1][&vec![0, 0]]]],
        )
        .unwrap();
        let dv = d_of_map(&vertex, &dpt, &dd1).unwrap();
        assert!(is_sieve(&dv).unwrap());
        let ident = d_of_map(&SimplicialMap::identity(Arc::new(d1.sset.clone())), &dd1, &dd1).unwrap();
        assert_eq!(ident.mor_map, (0..dd1.cat.num_morphisms()).collect::<Vec<_>>());
    }

    #[test]
    fn comparison_for_squares() {
        let k = Arc::new(delta(1, 1).sset);
        let cmp =
            projection_comparison(&k, &k, d_of((*k).clone(), 1), d_of((*k).clone(), 1), Exec::Sequential).unwrap();
        assert_eq!(cmp.dkl.num_objects(), 13);
        assert!(cmp.functor.is_valid());
        assert!(cmp.functor.is_injective_on_objects());
    }
}
