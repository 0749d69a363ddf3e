//! Low levels of the quasi-category of frames in chain complexes: Reedy
//! cofibrant homotopical diagrams on `D[n]`, together with the comparison
//! maps to the derived category.
//!
//! A [`Frame`] remembers the diagram on `[n]` it resolves and the levelwise
//! weak equivalence to its pullback along `p: D[n] -> [n]`.

use std::sync::Arc;

use crate::chain::{ChainComplex, ChainMap, GradedMatrix, HomologyView};
use crate::dsub::{d_of_map, Base, DCat, ProjectionComparison};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fincat::{
    full_subcategory, is_free, product_category, product_projection, CatFunctor, FinCategory, MorId, ObjId,
};
use crate::reedy::{reedy_replace, reedy_replace_rel, reedy_status, ChainDiagram, DiagramMap};
use crate::sset::{nerve_of_functor, Chain};

/// A morphism of the derived category, as a graded matrix in the homology
/// bases chosen by [`HomologyView`].
pub type HoMorphism = GradedMatrix;

pub const DEFAULT_FRAME_CAP: usize = 3;

/// `D[0]`, `D[1]`, `D[2]` at a common cap with the structure functors between
/// them.
#[derive(Clone, Debug)]
pub struct Frames {
    pub cap: usize,
    pub d: Vec<Arc<DCat>>,
    p: Vec<CatFunctor>,
}

/// An n-simplex of the frames nerve.
#[derive(Clone, Debug)]
pub struct Frame {
    pub level: usize,
    /// Reedy cofibrant homotopical diagram on `D[level]`.
    pub diagram: Arc<ChainDiagram>,
    /// The diagram on `[level]` it resolves.
    pub model: Arc<ChainDiagram>,
    /// `diagram -> p^* model`, a levelwise weak equivalence.
    pub weq: DiagramMap,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrameReport {
    pub reedy_failures: Vec<ObjId>,
    pub non_homotopical: Vec<MorId>,
    pub other: Vec<String>,
}

impl FrameReport {
    pub fn passed(&self) -> bool {
        self.reedy_failures.is_empty() && self.non_homotopical.is_empty() && self.other.is_empty()
    }
}

/// The functor `[m] -> [n]` given by a monotone map.
pub fn monotone_functor(m: usize, n: usize, phi: &[usize]) -> CatFunctor {
    let (a, b) = (Arc::new(FinCategory::chain(m)), Arc::new(FinCategory::chain(n)));
    let mor_map = (0..a.num_morphisms()).map(|f| b.hom(phi[a.src(f)], phi[a.tgt(f)])[0]).collect();
    CatFunctor::new(a, b, phi.to_vec(), mor_map)
}

fn nerve_keys(d: &DCat) -> &Arc<crate::sset::Keyed<Chain>> {
    match d.base() {
        Base::Category { nerve, .. } => nerve,
        Base::Simplicial(_) => unreachable!("frames live on subdivisions of categories"),
    }
}

/// `D(φ): D[m] -> D[n]` for a monotone `φ: [m] -> [n]`.
pub fn d_of_monotone(dm: &DCat, dn: &DCat, phi: &[usize]) -> Result<CatFunctor> {
    let n = nerve_keys(dn).sset.count(0) - 1;
    let f = monotone_functor(phi.len() - 1, n, phi);
    let nf = nerve_of_functor(&f, nerve_keys(dm), nerve_keys(dn));
    d_of_map(&nf, dm, dn)
}

impl Frames {
    pub fn new(cap: usize, exec: Exec) -> Result<Self> {
        let d: Vec<Arc<DCat>> = (0..=2).map(|n| DCat::standard(n, cap, exec).map(Arc::new)).collect::<Result<_>>()?;
        let p = d.iter().map(|x| x.p_categorical()).collect::<Result<_>>()?;
        Ok(Frames { cap, d, p })
    }

    pub fn p(&self, n: usize) -> &CatFunctor {
        &self.p[n]
    }

    /// The object `(0, a)` of `D[n]`.
    pub fn vertex(&self, n: usize, a: usize) -> ObjId {
        let s = nerve_keys(&self.d[n]).id(0, &Chain { start: a, arrows: vec![] }).unwrap();
        self.d[n].object_of(0, s).unwrap()
    }

    /// The object `(1, a -> b)` of `D[n]`.
    pub fn edge_object(&self, n: usize, a: usize, b: usize) -> ObjId {
        let base = match self.d[n].base() {
            Base::Category { category, .. } => category.clone(),
            Base::Simplicial(_) => unreachable!("frames live on subdivisions of categories"),
        };
        let key = Chain { start: a, arrows: vec![base.hom(a, b)[0]] };
        let s = nerve_keys(&self.d[n]).id(1, &key).unwrap();
        self.d[n].object_of(1, s).unwrap()
    }

    /// `D(φ)` between the stored subdivisions.
    pub fn structure_functor(&self, m: usize, n: usize, phi: &[usize]) -> Result<CatFunctor> {
        d_of_monotone(&self.d[m], &self.d[n], phi)
    }

    /// `p^* model` on `D[n]`.
    pub fn pullback(&self, model: &ChainDiagram) -> Result<ChainDiagram> {
        let n = model.index.num_objects() - 1;
        model.restrict(&self.p[n])
    }

    pub fn validate(&self, frame: &Frame) -> FrameReport {
        let mut report = validate_frame(&frame.diagram);
        if frame.level > 2 || *frame.diagram.index != **self.d[frame.level].category() {
            report.other.push("diagram is not indexed by the subdivision of its level".into());
            return report;
        }
        match self.pullback(&frame.model) {
            Ok(pm) if *frame.weq.target == pm => {}
            _ => report.other.push("weak equivalence does not land in the pulled-back model".into()),
        }
        if *frame.weq.source != *frame.diagram || !frame.weq.violations().is_empty() {
            report.other.push("weak equivalence is not a natural map out of the diagram".into());
        } else if !frame.weq.is_levelwise_weq() {
            report.other.push("weak equivalence is not levelwise".into());
        }
        report
    }

    /// `p^*` of `X` on `D[0]`, replaced to be Reedy cofibrant.
    pub fn frame_of_object(&self, x: Arc<ChainComplex>) -> Result<Frame> {
        let model = Arc::new(ChainDiagram::constant(Arc::new(FinCategory::chain(0)), x));
        let target = self.pullback(&model)?;
        let r = reedy_replace(&target)?;
        Ok(Frame { level: 0, diagram: r.diagram, model, weq: r.map })
    }

    /// An edge resolving `f`, restricting to the given endpoint frames.
    pub fn frame_of_map(&self, f: &ChainMap, v0: &Frame, v1: &Frame) -> Result<Frame> {
        if v0.level != 0 || v1.level != 0 {
            return Err(Error::Precondition("endpoints must be vertex frames".into()));
        }
        if *f.source != *v0.model.objects[0] || *f.target != *v1.model.objects[0] {
            return Err(Error::Precondition("map does not connect the endpoint models".into()));
        }
        let model = ChainDiagram::from_sequence(std::slice::from_ref(f))?;
        let pieces = [(self.structure_functor(0, 1, &[0])?, v0), (self.structure_functor(0, 1, &[1])?, v1)];
        self.extend(1, model, &pieces)
    }

    /// Builds both endpoint frames, then the edge.
    pub fn edge_of_map(&self, f: &ChainMap) -> Result<(Frame, Frame, Frame)> {
        let v0 = self.frame_of_object(f.source.clone())?;
        let v1 = self.frame_of_object(f.target.clone())?;
        let e = self.frame_of_map(f, &v0, &v1)?;
        Ok((v0, v1, e))
    }

    /// A triangle resolving `g ∘ f`, restricting to the edges `e01` and
    /// `e12` on the spine.
    pub fn triangle(&self, e01: &Frame, e12: &Frame) -> Result<Frame> {
        if e01.level != 1 || e12.level != 1 {
            return Err(Error::Precondition("spine pieces must be edge frames".into()));
        }
        let f = edge_map(&e01.model);
        let g = edge_map(&e12.model);
        let model = ChainDiagram::from_sequence(&[f, g])?;
        let pieces = [(self.structure_functor(1, 2, &[0, 1])?, e01), (self.structure_functor(1, 2, &[1, 2])?, e12)];
        self.extend(2, model, &pieces)
    }

    /// Replacement of `p^* model` on `D[n]` relative to the sieve over the
    /// given vertices, each fixed to the paired vertex frame.
    pub fn over_vertices(&self, model: ChainDiagram, vertices: &[(usize, &Frame)]) -> Result<Frame> {
        let n = model.index.num_objects() - 1;
        if n > 2 || vertices.iter().any(|(a, v)| *a > n || v.level != 0) {
            return Err(Error::Precondition("vertices must be vertex frames over [n] with n <= 2".into()));
        }
        let pieces =
            vertices.iter().map(|&(a, v)| Ok((self.structure_functor(0, n, &[a])?, v))).collect::<Result<Vec<_>>>()?;
        self.extend(n, model, &pieces)
    }

    /// Relative replacement of `p^* model` on `D[n]` with the given frames
    /// fixed on the images of their structure functors.
    fn extend(&self, n: usize, model: ChainDiagram, pieces: &[(CatFunctor, &Frame)]) -> Result<Frame> {
        let x = self.pullback(&model)?;
        let d = &self.d[n];
        let mut objs: Vec<ObjId> = pieces.iter().flat_map(|(f, _)| f.obj_map.iter().copied()).collect();
        objs.sort_unstable();
        objs.dedup();
        let (_, incl) = full_subcategory(d.category(), &objs);
        let (h, f) = glue(&incl, &x, pieces)?;
        let r = reedy_replace_rel(&x, &incl, &h, &f)?;
        Ok(Frame { level: n, diagram: r.diagram, model: Arc::new(model), weq: r.map })
    }

    /// Restriction along `D(φ)` for a monotone `φ: [m] -> [n]`.
    pub fn reindex(&self, frame: &Frame, phi: &[usize]) -> Result<Frame> {
        let m = phi.len() - 1;
        let functor = self.structure_functor(m, frame.level, phi)?;
        let diagram = Arc::new(frame.diagram.restrict(&functor)?);
        let model = Arc::new(frame.model.restrict(&monotone_functor(m, frame.level, phi))?);
        let weq = frame.weq.restrict(&functor)?;
        if *weq.target != self.pullback(&model)? {
            return Err(Error::Postcondition("p does not commute with reindexing".into()));
        }
        let weq = DiagramMap { source: diagram.clone(), target: weq.target.clone(), components: weq.components };
        Ok(Frame { level: m, diagram, model, weq })
    }

    /// `d_k` of an n-frame.
    pub fn face(&self, frame: &Frame, k: usize) -> Result<Frame> {
        let phi: Vec<usize> = (0..=frame.level).filter(|&v| v != k).collect();
        self.reindex(frame, &phi)
    }

    /// `s_k` of an n-frame.
    pub fn degenerate(&self, frame: &Frame, k: usize) -> Result<Frame> {
        let phi: Vec<usize> = (0..=frame.level + 1).map(|v| if v <= k { v } else { v - 1 }).collect();
        self.reindex(frame, &phi)
    }

    /// The zig-zag `F(0) -> F(0 -> 1) <- F(1)` on homology, composed as
    /// `right^{-1} ∘ left`.
    pub fn theta(&self, edge: &Frame) -> Result<HoMorphism> {
        let (left, right) = self.theta_legs(edge)?;
        let inv = right.inverse().ok_or_else(|| Error::NotWeakEquivalence("right leg of the zig-zag".into()))?;
        Ok(inv.after(&left))
    }

    fn theta_legs(&self, edge: &Frame) -> Result<(GradedMatrix, GradedMatrix)> {
        if edge.level != 1 {
            return Err(Error::Precondition("θ is defined on edges".into()));
        }
        let d = &self.d[1];
        let (a, b, e) = (self.vertex(1, 0), self.vertex(1, 1), self.edge_object(1, 0, 1));
        let views = [a, b, e].map(|o| HomologyView::new(&edge.diagram.objects[o]));
        let leg = |o: ObjId, k: usize, view: &HomologyView| {
            let m = d.morphism_of(e, &[k]).unwrap();
            debug_assert_eq!(d.category().src(m), o);
            edge.diagram.maps[m].induced_with(view, &views[2])
        };
        Ok((leg(a, 0, &views[0]), leg(b, 1, &views[1])))
    }

    /// `H(g_1)^{-1} ∘ H(f) ∘ H(g_0)` for the model map `f` and the
    /// replacement weak equivalences at the two vertices.
    pub fn conjugated_model_map(&self, edge: &Frame) -> Result<HoMorphism> {
        let (a, b) = (self.vertex(1, 0), self.vertex(1, 1));
        let f = edge_map(&edge.model);
        let (x0, x1) = (HomologyView::new(&f.source), HomologyView::new(&f.target));
        let (f0, f1) = (HomologyView::new(&edge.diagram.objects[a]), HomologyView::new(&edge.diagram.objects[b]));
        let g0 = edge.weq.components[a].induced_with(&f0, &x0);
        let g1 = edge.weq.components[b].induced_with(&f1, &x1);
        let inv = g1.inverse().ok_or_else(|| Error::NotWeakEquivalence("replacement at vertex 1".into()))?;
        Ok(inv.after(&f.induced_with(&x0, &x1)).after(&g0))
    }

    /// Every structure map of the edge is a quasi-isomorphism.
    pub fn is_equivalence_edge(&self, edge: &Frame) -> bool {
        edge.diagram.maps.iter().all(ChainMap::is_quasi_isomorphism)
    }

    /// Compares `θ(d_1 T)` with `θ(d_0 T) ∘ θ(d_2 T)`.
    pub fn check_triangle_coherence(&self, t: &Frame) -> Result<TriangleCheck> {
        let thetas: Vec<HoMorphism> =
            (0..3).map(|k| self.face(t, k).and_then(|e| self.theta(&e))).collect::<Result<_>>()?;
        let composite = thetas[0].after(&thetas[2]);
        Ok(TriangleCheck { d0: thetas[0].clone(), d1: thetas[1].clone(), d2: thetas[2].clone(), composite })
    }
}

#[derive(Clone, Debug)]
pub struct TriangleCheck {
    pub d0: HoMorphism,
    pub d1: HoMorphism,
    pub d2: HoMorphism,
    pub composite: HoMorphism,
}

impl TriangleCheck {
    pub fn passed(&self) -> bool {
        self.d1 == self.composite
    }
}

fn edge_map(model: &ChainDiagram) -> ChainMap {
    model.maps[model.index.hom(0, 1)[0]].clone()
}

/// Reedy cofibrancy and homotopicality with respect to the designated weak
/// equivalences of the index.
pub fn validate_frame(diagram: &ChainDiagram) -> FrameReport {
    let mut report = FrameReport::default();
    match reedy_status(diagram) {
        Ok(s) => report.reedy_failures = s.failures,
        Err(e) => report.other.push(e.to_string()),
    }
    report.non_homotopical = diagram.non_homotopical();
    report
}

/// The diagram on a sieve assembled from frames fixed on the images of
/// structure functors, and its map to the restriction of `x`.
fn glue(incl: &CatFunctor, x: &ChainDiagram, pieces: &[(CatFunctor, &Frame)]) -> Result<(ChainDiagram, DiagramMap)> {
    let sub = incl.source.clone();
    let mut objects = Vec::with_capacity(sub.num_objects());
    let mut components = Vec::with_capacity(sub.num_objects());
    for &j in &incl.obj_map {
        let mut found: Option<(Arc<ChainComplex>, ChainMap)> = None;
        for (f, frame) in pieces {
            if let Some(a) = f.obj_map.iter().position(|&o| o == j) {
                let value = (frame.diagram.objects[a].clone(), frame.weq.components[a].clone());
                match &found {
                    None => found = Some(value),
                    Some(prev) if prev.0 == value.0 && prev.1 == value.1 => {}
                    Some(_) => return Err(Error::Precondition("frames disagree where they overlap".into())),
                }
            }
        }
        let (o, c) = found.expect("sieve objects come from the pieces");
        objects.push(o);
        components.push(c);
    }
    let mut maps = Vec::with_capacity(sub.num_morphisms());
    for &m in &incl.mor_map {
        let value = pieces
            .iter()
            .find_map(|(f, frame)| f.mor_map.iter().position(|&k| k == m).map(|b| frame.diagram.maps[b].clone()))
            .ok_or_else(|| Error::Precondition("sieve morphism outside every piece".into()))?;
        maps.push(value);
    }
    let h = Arc::new(ChainDiagram::new(sub, objects, maps)?);
    let target = Arc::new(x.restrict(incl)?);
    let f = DiagramMap::new(h.clone(), target, components)?;
    Ok(((*h).clone(), f))
}

/// Restriction of a diagram on `DK × D[n]` along `D(K × Δ^n) -> DK × D[n]`.
pub fn phi_restrict(pc: &ProjectionComparison, y: &ChainDiagram) -> Result<ChainDiagram> {
    let out = y.restrict(&pc.functor)?;
    if reedy_status(y)?.is_cofibrant() {
        if let Some(&o) = reedy_status(&out)?.failures.first() {
            return Err(Error::Postcondition(format!(
                "restriction lost Reedy cofibrancy at {}",
                out.index.object_name(o)
            )));
        }
    }
    Ok(out)
}

/// `DI × D[0]` with its diagonal `DI -> DI × D[0]` and projection to `DI`.
#[derive(Clone, Debug)]
pub struct MixShape {
    pub product: Arc<FinCategory>,
    pub diagonal: CatFunctor,
    pub projection: CatFunctor,
}

/// `(n, σ) ↦ ((n, σ), (n, [n] -> [0]))`.
pub fn mix_shape(di: &DCat, d0: &DCat) -> Result<MixShape> {
    if di.cap() != d0.cap() {
        return Err(Error::CapMismatch(di.cap(), d0.cap()));
    }
    let (c, d) = (di.category().clone(), d0.category().clone());
    let product = Arc::new(product_category(&c, &d));
    let (no, nm) = (d.num_objects(), d.num_morphisms());
    let point = |n: usize| d0.object_of(n, 0).expect("D[0] has one simplex per dimension");
    let obj_map: Vec<ObjId> = (0..c.num_objects()).map(|o| o * no + point(di.object(o).0)).collect();
    let mor_map = (0..c.num_morphisms())
        .map(|m| {
            let n = di.object(c.tgt(m)).0;
            m * nm + d0.morphism_of(point(n), di.injection(m)).expect("injections exist over a point")
        })
        .collect();
    let diagonal = CatFunctor::new(c.clone(), product.clone(), obj_map, mor_map);
    let projection = product_projection(&c, &d, &product, true);
    Ok(MixShape { product, diagonal, projection })
}

/// `X̃(n, f) = X((n, f), (n, const))`.
pub fn e_mix(shape: &MixShape, y: &ChainDiagram) -> Result<ChainDiagram> {
    y.restrict(&shape.diagonal)
}

pub fn pr_pullback(shape: &MixShape, x: &ChainDiagram) -> Result<ChainDiagram> {
    x.restrict(&shape.projection)
}

/// Result of lifting a diagram of derived-category morphisms on a free
/// category to edges of frames.
#[derive(Clone, Debug)]
pub struct LiftReport {
    /// One edge per generating arrow, in the order of the generating quiver.
    pub generators: Vec<MorId>,
    pub edges: Vec<Frame>,
    /// `θ` of each edge, equal to the prescribed morphism on success.
    pub realized: Vec<HoMorphism>,
}

/// The complex `H(X)` with zero differential.
pub fn split_model(x: &ChainComplex) -> ChainComplex {
    ChainComplex::concentrated_dims(x.prime(), HomologyView::new(x).dims().clone())
}

/// The quasi-isomorphism `X -> H(X)` given by the homology classifier.
pub fn splitting(x: &Arc<ChainComplex>) -> ChainMap {
    let view = HomologyView::new(x);
    let s = Arc::new(split_model(x));
    let blocks = view
        .dims()
        .keys()
        .map(|&n| (n, view.classify(n, &crate::linalg::Matrix::identity(x.prime(), x.dim(n)))))
        .collect();
    ChainMap::new(x.clone(), s, blocks).expect("the homology classifier is a chain map")
}

impl Frames {
    /// Lifts `arrows[k]: H(F_src(0)) -> H(F_tgt(0))` for every generator of
    /// a free category to an edge between the vertex frames, realizing each
    /// morphism as a chain map between split models.
    pub fn lift_free_diagram(&self, c: &FinCategory, vertices: &[Frame], arrows: &[HoMorphism]) -> Result<LiftReport> {
        let quiver = is_free(c).ok_or_else(|| Error::Precondition("category is not free".into()))?;
        if vertices.len() != c.num_objects() || arrows.len() != quiver.arrows.len() {
            return Err(Error::Precondition("one frame per object and one morphism per generator expected".into()));
        }
        let v = self.vertex(0, 0);
        // Transport each vertex frame to one over its split model.
        let mut split = Vec::new();
        for frame in vertices {
            let x = frame.model.objects[0].clone();
            let r = splitting(&x);
            let model = Arc::new(ChainDiagram::constant(frame.model.index.clone(), r.target.clone()));
            let target = Arc::new(self.pullback(&model)?);
            let components = frame.weq.components.iter().map(|g| r.after(g)).collect();
            let weq = DiagramMap::new(frame.diagram.clone(), target, components)?;
            split.push(Frame { level: 0, diagram: frame.diagram.clone(), model, weq });
        }
        let mut edges = Vec::new();
        let mut realized = Vec::new();
        for (k, &m) in quiver.arrows.iter().enumerate() {
            let (a, b) = (c.src(m), c.tgt(m));
            let (fa, fb) = (&split[a], &split[b]);
            let (va, vb) = (HomologyView::new(&fa.diagram.objects[v]), HomologyView::new(&fb.diagram.objects[v]));
            let (sa, sb) = (fa.model.objects[0].clone(), fb.model.objects[0].clone());
            let (ha, hb) = (HomologyView::new(&sa), HomologyView::new(&sb));
            let ra = fa.weq.components[v].induced_with(&va, &ha);
            let rb = fb.weq.components[v].induced_with(&vb, &hb);
            let prescribed = &arrows[k];
            if prescribed.source() != va.dims() || prescribed.target() != vb.dims() {
                return Err(Error::Shape(format!("morphism for generator {} has the wrong homology shape", c.name(m))));
            }
            let ra_inv = ra.inverse().ok_or_else(|| Error::NotWeakEquivalence("splitting".into()))?;
            let moved = rb.after(prescribed).after(&ra_inv);
            // Split models have zero differential, so homology coordinates are
            // the coordinates themselves.
            let map = ChainMap::new(sa.clone(), sb.clone(), moved.blocks().clone())?;
            let edge = self.frame_of_map(&map, fa, fb)?;
            let theta = self.theta(&edge)?;
            if theta != *prescribed {
                return Err(Error::Postcondition(format!("lift of {} realizes a different morphism", c.name(m))));
            }
            edges.push(edge);
            realized.push(theta);
        }
        Ok(LiftReport { generators: quiver.arrows, edges, realized })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    use crate::linalg::Matrix;

    const P: u32 = 2;

    fn frames() -> Frames {
        Frames::new(2, Exec::Sequential).unwrap()
    }

    fn pt() -> Arc<ChainComplex> {
        Arc::new(ChainComplex::point(P, 0))
    }

    #[test]
    fn vertex_frames_validate() {
        let fr = frames();
        let v = fr.frame_of_object(pt()).unwrap();
        assert!(fr.validate(&v).passed());
        let at_id = &v.diagram.objects[fr.vertex(0, 0)];
        assert_eq!(HomologyView::new(at_id).dims(), &BTreeMap::from([(0, 1)]));
        let z = fr.frame_of_object(Arc::new(ChainComplex::zero(P))).unwrap();
        assert!(z.diagram.objects.iter().all(|x| HomologyView::new(x).is_zero()));
    }

    #[test]
    fn pulled_back_object_is_not_reedy_cofibrant() {
        let fr = frames();
        let x = fr.pullback(&ChainDiagram::constant(Arc::new(FinCategory::chain(0)), pt())).unwrap();
        let report = validate_frame(&x);
        assert!(report.non_homotopical.is_empty());
        assert!(!report.reedy_failures.is_empty());
    }

    #[test]
    fn edges_and_theta() {
        let fr = frames();
        let z = Arc::new(ChainComplex::zero(P));
        let (_, _, e) = fr.edge_of_map(&ChainMap::zero(z, pt())).unwrap();
        assert!(fr.validate(&e).passed());
        assert!(!fr.is_equivalence_edge(&e));
        let (v, _, id) = fr.edge_of_map(&ChainMap::identity(pt())).unwrap();
        assert!(fr.is_equivalence_edge(&id));
        assert!(fr.theta(&id).unwrap().is_identity());
        let deg = fr.degenerate(&v, 0).unwrap();
        assert!(fr.validate(&deg).passed());
        assert!(fr.theta(&deg).unwrap().is_identity());
        assert_eq!(fr.theta(&id).unwrap(), fr.conjugated_model_map(&id).unwrap());
    }

    #[test]
    fn triangle_of_two_maps() {
        let fr = frames();
        let two = Arc::new(ChainComplex::concentrated(P, 0, 2));
        let f =
            ChainMap::new(pt(), two.clone(), BTreeMap::from([(0, Matrix::from_rows(P, &[vec![1], vec![1]]))])).unwrap();
        let g = ChainMap::new(two.clone(), pt(), BTreeMap::from([(0, Matrix::from_rows(P, &[vec![1, 0]]))])).unwrap();
        let (_, v1, e01) = fr.edge_of_map(&f).unwrap();
        let v2 = fr.frame_of_object(pt()).unwrap();
        let e12 = fr.frame_of_map(&g, &v1, &v2).unwrap();
        let t = fr.triangle(&e01, &e12).unwrap();
        assert!(fr.validate(&t).passed());
        assert!(fr.check_triangle_coherence(&t).unwrap().passed());
    }

    #[test]
    fn splitting_is_a_quasi_isomorphism() {
        let x = Arc::new(ChainComplex::disk(P, 1));
        let s = splitting(&x);
        assert!(s.is_quasi_isomorphism());
        assert!(s.target.is_zero());
    }

    #[test]
    fn e_mix_undoes_projection() {
        let fr = frames();
        let v = fr.frame_of_object(pt()).unwrap();
        let shape = mix_shape(&fr.d[0], &fr.d[0]).unwrap();
        let pulled = pr_pullback(&shape, &v.diagram).unwrap();
        assert_eq!(e_mix(&shape, &pulled).unwrap(), *v.diagram);
    }
}
