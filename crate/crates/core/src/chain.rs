//! Bounded chain complexes over `F_p` and the cofibration-category structure
//! on them: quasi-isomorphisms are the weak equivalences and degreewise
//! injections the cofibrations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Quotient};

pub type Degree = i32;

/// A complex `C_n` with differentials `d_n: C_n -> C_{n-1}`.
///
/// Only nonzero dimensions and nonzero differentials are stored, so equal
/// complexes have equal representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChainComplex {
    prime: u32,
    dims: BTreeMap<Degree, usize>,
    diffs: BTreeMap<Degree, Matrix>,
}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainComplex[F_{}; dims {:?}]", self.prime, self.dims)
    }
}

impl ChainComplex {
    /// Checks shapes and `d ∘ d = 0`.
    pub fn new(prime: u32, dims: BTreeMap<Degree, usize>, diffs: BTreeMap<Degree, Matrix>) -> Result<Self> {
        let c = Self::new_unchecked(prime, dims, diffs);
        for (&n, m) in &c.diffs {
            if m.shape() != (c.dim(n - 1), c.dim(n)) {
                return Err(Error::Shape(format!(
                    "d_{n} has shape {:?}, expected {:?}",
                    m.shape(),
                    (c.dim(n - 1), c.dim(n))
                )));
            }
            if m.prime() != prime {
                return Err(Error::Shape(format!("d_{n} lives over F_{}", m.prime())));
            }
        }
        for (&n, m) in &c.diffs {
            if let Some(prev) = c.diffs.get(&(n - 1)) {
                if !prev.mul(m).is_zero() {
                    return Err(Error::Precondition(format!("d_{} ∘ d_{n} is not zero", n - 1)));
                }
            }
        }
        Ok(c)
    }

    fn new_unchecked(prime: u32, mut dims: BTreeMap<Degree, usize>, mut diffs: BTreeMap<Degree, Matrix>) -> Self {
        dims.retain(|_, d| *d > 0);
        diffs.retain(|_, m| !m.is_zero());
        ChainComplex { prime, dims, diffs }
    }

    pub fn zero(prime: u32) -> Self {
        ChainComplex { prime, dims: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    /// `F_p^k` concentrated in one degree.
    pub fn concentrated(prime: u32, degree: Degree, k: usize) -> Self {
        Self::new_unchecked(prime, BTreeMap::from([(degree, k)]), BTreeMap::new())
    }

    /// Zero differential with the given dimensions.
    pub fn concentrated_dims(prime: u32, dims: BTreeMap<Degree, usize>) -> Self {
        Self::new_unchecked(prime, dims, BTreeMap::new())
    }

    /// `F_p` in degree `degree`.
    pub fn point(prime: u32, degree: Degree) -> Self {
        Self::concentrated(prime, degree, 1)
    }

    /// `F_p --id--> F_p` in degrees `degree` and `degree - 1`.
    pub fn disk(prime: u32, degree: Degree) -> Self {
        Self::new_unchecked(
            prime,
            BTreeMap::from([(degree - 1, 1), (degree, 1)]),
            BTreeMap::from([(degree, Matrix::identity(prime, 1))]),
        )
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn dim(&self, n: Degree) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<Degree, usize> {
        &self.dims
    }

    pub fn diffs(&self) -> &BTreeMap<Degree, Matrix> {
        &self.diffs
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Degrees with nonzero dimension.
    pub fn degrees(&self) -> Vec<Degree> {
        self.dims.keys().copied().collect()
    }

    pub fn range(&self) -> Option<(Degree, Degree)> {
        Some((*self.dims.keys().next()?, *self.dims.keys().next_back()?))
    }

    pub fn d(&self, n: Degree) -> Matrix {
        self.diffs.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(self.prime, self.dim(n - 1), self.dim(n)))
    }
}

fn degree_union<'a>(maps: impl IntoIterator<Item = &'a BTreeMap<Degree, usize>>) -> BTreeSet<Degree> {
    maps.into_iter().flat_map(|m| m.keys().copied()).collect()
}

/// Homology with chosen bases: `reps(n)` are cycles whose classes form a
/// basis of `H_n`, and `classify(n, x)` returns coordinates of cycles.
#[derive(Clone, Debug)]
pub struct HomologyView {
    prime: u32,
    reps: BTreeMap<Degree, Matrix>,
    classifier: BTreeMap<Degree, Matrix>,
    dims: BTreeMap<Degree, usize>,
}

impl HomologyView {
    pub fn new(c: &ChainComplex) -> Self {
        let p = c.prime;
        let mut reps = BTreeMap::new();
        let mut classifier = BTreeMap::new();
        let mut dims = BTreeMap::new();
        for n in c.degrees() {
            let cycles = c.d(n).kernel();
            let z = cycles.cols();
            if z == 0 {
                continue;
            }
            let boundaries = c.d(n + 1);
            let in_cycles = if boundaries.cols() == 0 {
                Matrix::zeros(p, z, 0)
            } else {
                cycles.solve(&boundaries).expect("boundaries are cycles")
            };
            let q = Quotient::new(p, z, &in_cycles);
            if q.dim() == 0 {
                continue;
            }
            let left = cycles.left_inverse().expect("kernel bases are independent");
            reps.insert(n, cycles.mul(&q.section));
            classifier.insert(n, q.projection.mul(&left));
            dims.insert(n, q.dim());
        }
        HomologyView { prime: p, reps, classifier, dims }
    }

    pub fn dims(&self) -> &BTreeMap<Degree, usize> {
        &self.dims
    }

    pub fn dim(&self, n: Degree) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Cycle representatives of the basis of `H_n` (columns in `C_n`).
    pub fn reps(&self, n: Degree, ambient: usize) -> Matrix {
        self.reps.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(self.prime, ambient, 0))
    }

    /// Homology classes of the cycles given as columns of `x`.
    pub fn classify(&self, n: Degree, x: &Matrix) -> Matrix {
        match self.classifier.get(&n) {
            Some(k) => k.mul(x),
            None => Matrix::zeros(self.prime, 0, x.cols()),
        }
    }
}

/// A degreewise matrix between graded vector spaces; the computational
/// image of a morphism in the homotopy category.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedMatrix {
    prime: u32,
    source: BTreeMap<Degree, usize>,
    target: BTreeMap<Degree, usize>,
    blocks: BTreeMap<Degree, Matrix>,
}

impl fmt::Debug for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedMatrix")?;
        f.debug_map().entries(self.blocks.iter()).finish()
    }
}

impl GradedMatrix {
    /// `blocks` may omit degrees; missing blocks are zero.
    pub fn new(
        prime: u32,
        source: BTreeMap<Degree, usize>,
        target: BTreeMap<Degree, usize>,
        blocks: BTreeMap<Degree, Matrix>,
    ) -> Result<Self> {
        let mut full = BTreeMap::new();
        for n in degree_union([&source, &target]) {
            let (r, c) = (target.get(&n).copied().unwrap_or(0), source.get(&n).copied().unwrap_or(0));
            let b = blocks.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(prime, r, c));
            if b.shape() != (r, c) {
                return Err(Error::Shape(format!(
                    "block in degree {n} has shape {:?}, expected {:?}",
                    b.shape(),
                    (r, c)
                )));
            }
            full.insert(n, b);
        }
        if let Some(n) = blocks.keys().find(|n| !full.contains_key(n)) {
            if !blocks[n].is_zero() {
                return Err(Error::Shape(format!("block in degree {n} outside the support")));
            }
        }
        let mut source = source;
        let mut target = target;
        source.retain(|_, d| *d > 0);
        target.retain(|_, d| *d > 0);
        Ok(GradedMatrix { prime, source, target, blocks: full })
    }

    pub fn identity(prime: u32, dims: &BTreeMap<Degree, usize>) -> Self {
        let blocks = dims.iter().map(|(&n, &d)| (n, Matrix::identity(prime, d))).collect();
        GradedMatrix::new(prime, dims.clone(), dims.clone(), blocks).unwrap()
    }

    pub fn source(&self) -> &BTreeMap<Degree, usize> {
        &self.source
    }

    pub fn target(&self) -> &BTreeMap<Degree, usize> {
        &self.target
    }

    pub fn blocks(&self) -> &BTreeMap<Degree, Matrix> {
        &self.blocks
    }

    pub fn block(&self, n: Degree) -> Matrix {
        self.blocks.get(&n).cloned().unwrap_or_else(|| {
            Matrix::zeros(
                self.prime,
                self.target.get(&n).copied().unwrap_or(0),
                self.source.get(&n).copied().unwrap_or(0),
            )
        })
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &GradedMatrix) -> GradedMatrix {
        assert_eq!(self.source, inner.target, "graded matrices are not composable");
        let blocks = degree_union([&inner.source, &self.target])
            .into_iter()
            .map(|n| (n, self.block(n).mul(&inner.block(n))))
            .collect();
        GradedMatrix::new(self.prime, inner.source.clone(), self.target.clone(), blocks).unwrap()
    }

    pub fn is_invertible(&self) -> bool {
        self.source == self.target && self.blocks.values().all(Matrix::is_invertible)
    }

    pub fn inverse(&self) -> Option<GradedMatrix> {
        if self.source != self.target {
            return None;
        }
        let mut blocks = BTreeMap::new();
        for (&n, b) in &self.blocks {
            blocks.insert(n, b.inverse()?);
        }
        Some(GradedMatrix { prime: self.prime, source: self.target.clone(), target: self.source.clone(), blocks })
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.blocks.iter().all(|(_, b)| *b == Matrix::identity(self.prime, b.rows()))
    }
}

/// A chain map, stored as nonzero blocks `f_n: X_n -> Y_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainMap {
    pub source: Arc<ChainComplex>,
    pub target: Arc<ChainComplex>,
    blocks: BTreeMap<Degree, Matrix>,
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainMap[{:?} -> {:?}]", self.source.dims, self.target.dims)
    }
}

impl ChainMap {
    /// Checks shapes and `d f = f d`.
    pub fn new(source: Arc<ChainComplex>, target: Arc<ChainComplex>, blocks: BTreeMap<Degree, Matrix>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, blocks);
        for (&n, b) in &f.blocks {
            if b.shape() != (f.target.dim(n), f.source.dim(n)) {
                return Err(Error::Shape(format!("f_{n} has shape {:?}", b.shape())));
            }
        }
        if let Some(n) = f.non_commuting_degree() {
            return Err(Error::Precondition(format!("map does not commute with differentials in degree {n}")));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: Arc<ChainComplex>,
        target: Arc<ChainComplex>,
        mut blocks: BTreeMap<Degree, Matrix>,
    ) -> Self {
        blocks.retain(|_, m| !m.is_zero());
        ChainMap { source, target, blocks }
    }

    fn non_commuting_degree(&self) -> Option<Degree> {
        let degrees = degree_union([self.source.dims(), self.target.dims()]);
        degrees.into_iter().find(|&n| {
            let lhs = self.target.d(n).mul(&self.block(n));
            let rhs = self.block(n - 1).mul(&self.source.d(n));
            lhs != rhs
        })
    }

    pub fn is_valid(&self) -> bool {
        self.non_commuting_degree().is_none()
    }

    pub fn identity(x: Arc<ChainComplex>) -> Self {
        let blocks = x.dims.iter().map(|(&n, &d)| (n, Matrix::identity(x.prime, d))).collect();
        ChainMap { source: x.clone(), target: x, blocks }
    }

    pub fn zero(source: Arc<ChainComplex>, target: Arc<ChainComplex>) -> Self {
        ChainMap { source, target, blocks: BTreeMap::new() }
    }

    pub fn prime(&self) -> u32 {
        self.source.prime
    }

    pub fn block(&self, n: Degree) -> Matrix {
        self.blocks
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.prime(), self.target.dim(n), self.source.dim(n)))
    }

    pub fn blocks(&self) -> &BTreeMap<Degree, Matrix> {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &ChainMap) -> ChainMap {
        assert_eq!(*self.source, *inner.target, "chain maps are not composable");
        let blocks = inner.blocks.iter().map(|(&n, b)| (n, self.block(n).mul(b))).collect();
        ChainMap::new_unchecked(inner.source.clone(), self.target.clone(), blocks)
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        assert!(*self.source == *other.source && *self.target == *other.target, "maps have different endpoints");
        let degrees: BTreeSet<Degree> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        let blocks = degrees.into_iter().map(|n| (n, self.block(n).add(&other.block(n)))).collect();
        ChainMap::new_unchecked(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn scale(&self, s: u32) -> ChainMap {
        let blocks = self.blocks.iter().map(|(&n, b)| (n, b.scale(s))).collect();
        ChainMap::new_unchecked(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target && *self == ChainMap::identity(self.source.clone())
    }

    /// Degreewise injective.
    pub fn is_cofibration(&self) -> bool {
        self.source.degrees().into_iter().all(|n| self.block(n).is_injective())
    }

    pub fn is_isomorphism(&self) -> bool {
        degree_union([self.source.dims(), self.target.dims()]).into_iter().all(|n| self.block(n).is_invertible())
    }

    /// The map on homology in the bases of the given views.
    pub fn induced_with(&self, hx: &HomologyView, hy: &HomologyView) -> GradedMatrix {
        let blocks = degree_union([hx.dims(), hy.dims()])
            .into_iter()
            .map(|n| (n, hy.classify(n, &self.block(n).mul(&hx.reps(n, self.source.dim(n))))))
            .collect();
        GradedMatrix::new(self.prime(), hx.dims().clone(), hy.dims().clone(), blocks).unwrap()
    }

    pub fn induced(&self) -> GradedMatrix {
        self.induced_with(&HomologyView::new(&self.source), &HomologyView::new(&self.target))
    }

    pub fn is_quasi_isomorphism(&self) -> bool {
        self.induced().is_invertible()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapClass {
    pub is_weq: bool,
    pub is_cofibration: bool,
    pub is_acyclic_cofibration: bool,
}

pub fn classify_map(f: &ChainMap) -> MapClass {
    let is_weq = f.is_quasi_isomorphism();
    let is_cofibration = f.is_cofibration();
    MapClass { is_weq, is_cofibration, is_acyclic_cofibration: is_weq && is_cofibration }
}

/// `Cone(f)_n = X_{n-1} ⊕ Y_n`, `d(x, y) = (-dx, f x + dy)`.
pub fn mapping_cone(f: &ChainMap) -> ChainComplex {
    let (x, y) = (&f.source, &f.target);
    let p = f.prime();
    let degrees: BTreeSet<Degree> = x.degrees().into_iter().map(|n| n + 1).chain(y.degrees()).collect();
    let dims = degrees.iter().map(|&n| (n, x.dim(n - 1) + y.dim(n))).collect();
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        let mut d = Matrix::zeros(p, x.dim(n - 2) + y.dim(n - 1), x.dim(n - 1) + y.dim(n));
        d.paste(0, 0, &x.d(n - 1).neg());
        d.paste(x.dim(n - 2), 0, &f.block(n - 1));
        d.paste(x.dim(n - 2), x.dim(n - 1), &y.d(n));
        diffs.insert(n, d);
    }
    ChainComplex::new(p, dims, diffs).expect("cones of chain maps are complexes")
}

/// Injections and projections of a finite direct sum.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub object: Arc<ChainComplex>,
    pub injections: Vec<ChainMap>,
    pub projections: Vec<ChainMap>,
    /// Offset of each summand in each degree.
    pub offsets: Vec<BTreeMap<Degree, usize>>,
}

pub fn direct_sum(prime: u32, parts: &[Arc<ChainComplex>]) -> DirectSum {
    let degrees = degree_union(parts.iter().map(|c| c.dims()));
    let mut offsets = vec![BTreeMap::new(); parts.len()];
    let mut dims = BTreeMap::new();
    for &n in &degrees {
        let mut acc = 0;
        for (k, c) in parts.iter().enumerate() {
            offsets[k].insert(n, acc);
            acc += c.dim(n);
        }
        dims.insert(n, acc);
    }
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        let mut d = Matrix::zeros(prime, dims.get(&(n - 1)).copied().unwrap_or(0), dims[&n]);
        for (k, c) in parts.iter().enumerate() {
            if c.dim(n) > 0 && c.dim(n - 1) > 0 {
                d.paste(offsets[k][&(n - 1)], offsets[k][&n], &c.d(n));
            }
        }
        diffs.insert(n, d);
    }
    let object = Arc::new(ChainComplex::new_unchecked(prime, dims, diffs));
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    for (k, c) in parts.iter().enumerate() {
        let mut inj = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for (&n, &d) in c.dims() {
            let mut m = Matrix::zeros(prime, object.dim(n), d);
            m.paste(offsets[k][&n], 0, &Matrix::identity(prime, d));
            proj.insert(n, m.transpose());
            inj.insert(n, m);
        }
        injections.push(ChainMap::new_unchecked(c.clone(), object.clone(), inj));
        projections.push(ChainMap::new_unchecked(object.clone(), c.clone(), proj));
    }
    DirectSum { object, injections, projections, offsets }
}

/// `⊕ f_k: ⊕ X_k -> ⊕ Y_k`.
pub fn coproduct_of_maps(prime: u32, maps: &[ChainMap]) -> (DirectSum, DirectSum, ChainMap) {
    let xs: Vec<Arc<ChainComplex>> = maps.iter().map(|f| f.source.clone()).collect();
    let ys: Vec<Arc<ChainComplex>> = maps.iter().map(|f| f.target.clone()).collect();
    let (sx, sy) = (direct_sum(prime, &xs), direct_sum(prime, &ys));
    let total = maps
        .iter()
        .enumerate()
        .map(|(k, f)| sy.injections[k].after(f).after(&sx.projections[k]))
        .fold(ChainMap::zero(sx.object.clone(), sy.object.clone()), |acc, g| acc.add(&g));
    (sx, sy, total)
}

/// A map out of `ambient` that kills a subcomplex can be pushed through
/// the quotient with [`QuotientComplex::descend`].
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    pub object: Arc<ChainComplex>,
    pub projection: ChainMap,
    sections: BTreeMap<Degree, Matrix>,
}

impl QuotientComplex {
    /// Quotient of `ambient` by the subcomplex spanned degreewise by the
    /// columns of `relations` (which must be closed under `d`).
    pub fn new(ambient: &Arc<ChainComplex>, relations: &BTreeMap<Degree, Matrix>) -> Self {
        let p = ambient.prime;
        let mut quotients = BTreeMap::new();
        for n in ambient.degrees() {
            let rel = relations.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(p, ambient.dim(n), 0));
            quotients.insert(n, Quotient::new(p, ambient.dim(n), &rel));
        }
        let dims: BTreeMap<Degree, usize> = quotients.iter().map(|(&n, q)| (n, q.dim())).collect();
        let mut diffs = BTreeMap::new();
        for (&n, q) in &quotients {
            if let Some(prev) = quotients.get(&(n - 1)) {
                diffs.insert(n, prev.projection.mul(&ambient.d(n)).mul(&q.section));
            }
        }
        let object = Arc::new(ChainComplex::new_unchecked(p, dims, diffs));
        debug_assert!(ChainComplex::new(p, object.dims.clone(), object.diffs.clone()).is_ok());
        let projection = ChainMap::new_unchecked(
            ambient.clone(),
            object.clone(),
            quotients.iter().map(|(&n, q)| (n, q.projection.clone())).collect(),
        );
        let sections = quotients.into_iter().map(|(n, q)| (n, q.section)).collect();
        QuotientComplex { object, projection, sections }
    }

    /// The map `ambient / relations -> T` induced by `total: ambient -> T`.
    pub fn descend(&self, total: &ChainMap) -> ChainMap {
        let blocks = self.sections.iter().map(|(&n, s)| (n, total.block(n).mul(s))).collect();
        ChainMap::new_unchecked(self.object.clone(), total.target.clone(), blocks)
    }
}

/// Columns spanning the image of a map, per degree.
fn image_columns(f: &ChainMap) -> BTreeMap<Degree, Matrix> {
    f.source.degrees().into_iter().map(|n| (n, f.block(n))).collect()
}

#[derive(Clone, Debug)]
pub struct PushoutSquare {
    pub object: Arc<ChainComplex>,
    /// `B -> D`
    pub from_b: ChainMap,
    /// `C -> D`
    pub from_c: ChainMap,
    quotient: QuotientComplex,
    sum: DirectSum,
}

impl PushoutSquare {
    /// The map `D -> T` induced by `u: B -> T` and `v: C -> T` agreeing on `A`.
    pub fn induced(&self, u: &ChainMap, v: &ChainMap) -> ChainMap {
        let total = u.after(&self.sum.projections[0]).add(&v.after(&self.sum.projections[1]));
        self.quotient.descend(&total)
    }
}

/// `B ⊔_A C` for arbitrary `i: A -> B` and `g: A -> C`.
pub fn pushout(i: &ChainMap, g: &ChainMap) -> Result<PushoutSquare> {
    if *i.source != *g.source {
        return Err(Error::Precondition("pushout legs have different sources".into()));
    }
    let p = i.prime();
    let sum = direct_sum(p, &[i.target.clone(), g.target.clone()]);
    let diff = sum.injections[0].after(i).add(&sum.injections[1].after(g).scale(p - 1));
    let quotient = QuotientComplex::new(&sum.object, &image_columns(&diff));
    let from_b = quotient.projection.after(&sum.injections[0]);
    let from_c = quotient.projection.after(&sum.injections[1]);
    Ok(PushoutSquare { object: quotient.object.clone(), from_b, from_c, quotient, sum })
}

/// Pushout along a cofibration `i`; the map `C -> D` is a cofibration, and
/// acyclic when `i` is.
pub fn pushout_along_cofibration(i: &ChainMap, g: &ChainMap) -> Result<PushoutSquare> {
    if !i.is_cofibration() {
        return Err(Error::NotCofibration { degree: first_non_injective(i) });
    }
    let square = pushout(i, g)?;
    if !square.from_c.is_cofibration() {
        return Err(Error::Postcondition("pushout of a cofibration is not a cofibration".into()));
    }
    if classify_map(i).is_weq && !square.from_c.is_quasi_isomorphism() {
        return Err(Error::Postcondition("pushout of an acyclic cofibration is not acyclic".into()));
    }
    Ok(square)
}

fn first_non_injective(f: &ChainMap) -> Degree {
    f.source.degrees().into_iter().find(|&n| !f.block(n).is_injective()).unwrap_or(0)
}

/// `f = q ∘ i` with `i` a cofibration and `q` a weak equivalence.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub object: Arc<ChainComplex>,
    pub cofibration: ChainMap,
    pub weq: ChainMap,
}

impl Factorization {
    /// Checks the composite, the cofibration and the quasi-isomorphism.
    pub fn verify(&self, f: &ChainMap) -> Result<()> {
        if self.weq.after(&self.cofibration) != *f {
            return Err(Error::Postcondition("factorization does not compose to the map".into()));
        }
        if !self.cofibration.is_cofibration() {
            return Err(Error::Postcondition("first factor is not a cofibration".into()));
        }
        if !self.weq.is_quasi_isomorphism() {
            return Err(Error::Postcondition("second factor is not a quasi-isomorphism".into()));
        }
        Ok(())
    }
}

/// Mapping cylinder: `Cyl_n = X_n ⊕ X_{n-1} ⊕ Y_n` with
/// `d(x, x', y) = (dx - x', -dx', dy + f x')`, `i(x) = (x, 0, 0)` and
/// `q(x, x', y) = f x + y`.
pub fn factorize(f: &ChainMap) -> Factorization {
    let (x, y) = (&f.source, &f.target);
    let p = f.prime();
    let degrees: BTreeSet<Degree> = x.degrees().into_iter().flat_map(|n| [n, n + 1]).chain(y.degrees()).collect();
    let size = |n: Degree| x.dim(n) + x.dim(n - 1) + y.dim(n);
    let dims = degrees.iter().map(|&n| (n, size(n))).collect();
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        let mut d = Matrix::zeros(p, size(n - 1), size(n));
        let (r1, r2) = (x.dim(n - 1), x.dim(n - 1) + x.dim(n - 2));
        let (c1, c2) = (x.dim(n), x.dim(n) + x.dim(n - 1));
        d.paste(0, 0, &x.d(n));
        d.paste(0, c1, &Matrix::identity(p, x.dim(n - 1)).neg());
        d.paste(r1, c1, &x.d(n - 1).neg());
        d.paste(r2, c1, &f.block(n - 1));
        d.paste(r2, c2, &y.d(n));
        diffs.insert(n, d);
    }
    let cyl = Arc::new(ChainComplex::new(p, dims, diffs).expect("the cylinder differential squares to zero"));
    let mut i = BTreeMap::new();
    let mut q = BTreeMap::new();
    for &n in &degrees {
        let mut a = Matrix::zeros(p, size(n), x.dim(n));
        a.paste(0, 0, &Matrix::identity(p, x.dim(n)));
        i.insert(n, a);
        let mut b = Matrix::zeros(p, y.dim(n), size(n));
        b.paste(0, 0, &f.block(n));
        b.paste(0, x.dim(n) + x.dim(n - 1), &Matrix::identity(p, y.dim(n)));
        q.insert(n, b);
    }
    Factorization {
        cofibration: ChainMap::new_unchecked(x.clone(), cyl.clone(), i),
        weq: ChainMap::new_unchecked(cyl.clone(), y.clone(), q),
        object: cyl,
    }
}

/// Factorization through `Y ⊕ Cone(id_K)` where `K = ker f`:
/// `i = (f, α, αd - dα)` for a linear retraction `α` onto `K`, and `q` the
/// projection. When `f` is already injective this returns `(f, id)`.
pub fn factorize_kernel_cone(f: &ChainMap) -> Factorization {
    let (x, y) = (&f.source, &f.target);
    let p = f.prime();
    let mut kernel = BTreeMap::new();
    let mut retraction = BTreeMap::new();
    for n in x.degrees() {
        let k = f.block(n).kernel();
        if k.cols() > 0 {
            retraction.insert(n, k.left_inverse().expect("kernel bases are independent"));
            kernel.insert(n, k);
        }
    }
    if kernel.is_empty() {
        return Factorization { object: y.clone(), cofibration: f.clone(), weq: ChainMap::identity(y.clone()) };
    }
    let kd = |n: Degree| kernel.get(&n).map_or(0, Matrix::cols);
    let alpha = |n: Degree| retraction.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(p, 0, x.dim(n)));
    let kappa = |n: Degree| kernel.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(p, x.dim(n), 0));
    // Differential of K and the correction term αd - dα.
    let dk = |n: Degree| alpha(n - 1).mul(&x.d(n)).mul(&kappa(n));
    let beta = |n: Degree| alpha(n - 1).mul(&x.d(n)).sub(&dk(n).mul(&alpha(n)));
    let degrees: BTreeSet<Degree> = y.degrees().into_iter().chain(kernel.keys().flat_map(|&n| [n, n + 1])).collect();
    let size = |n: Degree| y.dim(n) + kd(n) + kd(n - 1);
    let dims = degrees.iter().map(|&n| (n, size(n))).collect();
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        // Z_n = Y_n ⊕ K_n ⊕ K_{n-1};  d(y, a, b) = (dy, da + b, -db)
        let mut d = Matrix::zeros(p, size(n - 1), size(n));
        d.paste(0, 0, &y.d(n));
        let (r, c) = (y.dim(n - 1), y.dim(n));
        d.paste(r, c, &dk(n));
        d.paste(r, c + kd(n), &Matrix::identity(p, kd(n - 1)));
        d.paste(r + kd(n - 1), c + kd(n), &dk(n - 1).neg());
        diffs.insert(n, d);
    }
    let z = Arc::new(ChainComplex::new(p, dims, diffs).expect("the kernel cone differential squares to zero"));
    let mut iota = BTreeMap::new();
    let mut q = BTreeMap::new();
    for &n in &degrees {
        let mut a = Matrix::zeros(p, size(n), x.dim(n));
        a.paste(0, 0, &f.block(n));
        a.paste(y.dim(n), 0, &alpha(n));
        a.paste(y.dim(n) + kd(n), 0, &beta(n));
        iota.insert(n, a);
        let mut b = Matrix::zeros(p, y.dim(n), size(n));
        b.paste(0, 0, &Matrix::identity(p, y.dim(n)));
        q.insert(n, b);
    }
    Factorization {
        cofibration: ChainMap::new_unchecked(x.clone(), z.clone(), iota),
        weq: ChainMap::new_unchecked(z.clone(), y.clone(), q),
        object: z,
    }
}

/// A colimit with its cocone.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub object: Arc<ChainComplex>,
    pub cocone: Vec<ChainMap>,
}

/// Colimit of a finite sequence `X_0 -> X_1 -> ... -> X_n` of cofibrations:
/// the last term with the composite maps.
pub fn sequential_colimit(maps: &[ChainMap]) -> Result<Colimit> {
    let Some(last) = maps.last() else {
        return Err(Error::Precondition("sequence needs at least one map".into()));
    };
    for (k, f) in maps.iter().enumerate() {
        if !f.is_cofibration() {
            return Err(Error::NotCofibration { degree: first_non_injective(f) });
        }
        if k > 0 && *maps[k - 1].target != *f.source {
            return Err(Error::Precondition(format!("maps {} and {k} are not composable", k - 1)));
        }
    }
    let object = last.target.clone();
    let mut cocone = vec![ChainMap::identity(object.clone())];
    for f in maps.iter().rev() {
        let next = cocone.last().unwrap().after(f);
        cocone.push(next);
    }
    cocone.reverse();
    Ok(Colimit { object, cocone })
}

/// Exact functors available for pushing diagrams forward.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactFunctor {
    /// `X[k]_n = X_{n-k}` with differential `(-1)^k d`.
    Shift(i32),
    /// `X ⊗ F_p^k = X^{⊕k}`.
    TensorVector(usize),
}

impl ExactFunctor {
    pub fn on_complex(self, x: &ChainComplex) -> ChainComplex {
        let p = x.prime;
        match self {
            ExactFunctor::Shift(k) => {
                let sign = if k.rem_euclid(2) == 1 { p - 1 } else { 1 };
                ChainComplex::new_unchecked(
                    p,
                    x.dims.iter().map(|(&n, &d)| (n + k, d)).collect(),
                    x.diffs.iter().map(|(&n, m)| (n + k, m.scale(sign))).collect(),
                )
            }
            ExactFunctor::TensorVector(k) => ChainComplex::new_unchecked(
                p,
                x.dims.iter().map(|(&n, &d)| (n, d * k)).collect(),
                x.diffs.iter().map(|(&n, m)| (n, Matrix::block_diag(p, &vec![m; k]))).collect(),
            ),
        }
    }

    pub fn on_map(self, f: &ChainMap, source: Arc<ChainComplex>, target: Arc<ChainComplex>) -> ChainMap {
        let p = f.prime();
        let blocks = match self {
            ExactFunctor::Shift(k) => f.blocks.iter().map(|(&n, m)| (n + k, m.clone())).collect(),
            ExactFunctor::TensorVector(k) => {
                f.blocks.iter().map(|(&n, m)| (n, Matrix::block_diag(p, &vec![m; k]))).collect()
            }
        };
        ChainMap::new_unchecked(source, target, blocks)
    }

    pub fn apply_map(self, f: &ChainMap) -> ChainMap {
        self.on_map(f, Arc::new(self.on_complex(&f.source)), Arc::new(self.on_complex(&f.target)))
    }
}

/// A basis of the space of chain maps `X -> Y`.
pub fn chain_maps_basis(x: &Arc<ChainComplex>, y: &Arc<ChainComplex>) -> Vec<ChainMap> {
    let p = x.prime;
    let degrees: Vec<Degree> = x.degrees().into_iter().filter(|&n| y.dim(n) > 0).collect();
    let mut offset = BTreeMap::new();
    let mut unknowns = 0;
    for &n in &degrees {
        offset.insert(n, unknowns);
        unknowns += y.dim(n) * x.dim(n);
    }
    // Unknown (r, c) of block n is at offset[n] + r * dim X_n + c.
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let check: BTreeSet<Degree> = degrees.iter().flat_map(|&n| [n, n + 1]).collect();
    for n in check {
        // (d^Y_n f_n - f_{n-1} d^X_n)[r][c] = 0 for r < dim Y_{n-1}, c < dim X_n.
        let (dy, dx) = (y.d(n), x.d(n));
        for r in 0..y.dim(n - 1) {
            for c in 0..x.dim(n) {
                let mut row = vec![0u32; unknowns];
                if let Some(&o) = offset.get(&n) {
                    for k in 0..y.dim(n) {
                        row[o + k * x.dim(n) + c] = (row[o + k * x.dim(n) + c] + dy.get(r, k)) % p;
                    }
                }
                if let Some(&o) = offset.get(&(n - 1)) {
                    for k in 0..x.dim(n - 1) {
                        let v = (p - dx.get(k, c)) % p;
                        row[o + r * x.dim(n - 1) + k] = (row[o + r * x.dim(n - 1) + k] + v) % p;
                    }
                }
                if row.iter().any(|&v| v != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let system = if rows.is_empty() { Matrix::zeros(p, 0, unknowns) } else { Matrix::from_rows(p, &rows) };
    let kernel = if rows.is_empty() { Matrix::identity(p, unknowns) } else { system.kernel() };
    (0..kernel.cols())
        .map(|j| {
            let v = kernel.column(j);
            let blocks = degrees
                .iter()
                .map(|&n| {
                    (n, Matrix::from_entries(p, y.dim(n), x.dim(n), &v[offset[&n]..offset[&n] + y.dim(n) * x.dim(n)]))
                })
                .collect();
            ChainMap::new_unchecked(x.clone(), y.clone(), blocks)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 2;

    fn arc(c: ChainComplex) -> Arc<ChainComplex> {
        Arc::new(c)
    }

    /// `H` is acyclic iff rank-nullity balances in every degree.
    fn acyclic_by_ranks(c: &ChainComplex) -> bool {
        c.degrees().into_iter().all(|n| c.dim(n) == c.d(n).rank() + c.d(n + 1).rank())
    }

    #[test]
    fn homology_of_basic_complexes() {
        let h = HomologyView::new(&ChainComplex::point(P, 0));
        assert_eq!(h.dims(), &BTreeMap::from([(0, 1)]));
        assert!(HomologyView::new(&ChainComplex::disk(P, 1)).is_zero());
    }

    #[test]
    fn classification_examples() {
        let pt = arc(ChainComplex::point(P, 0));
        let id = ChainMap::identity(pt.clone());
        assert_eq!(classify_map(&id), MapClass { is_weq: true, is_cofibration: true, is_acyclic_cofibration: true });
        let zero = arc(ChainComplex::zero(P));
        let c = classify_map(&ChainMap::zero(zero.clone(), pt.clone()));
        assert!(c.is_cofibration && !c.is_weq);
        // F_p into the degree-0 end of the disk F_p -> F_p (degrees 1, 0).
        let disk = arc(ChainComplex::disk(P, 1));
        let incl = ChainMap::new(pt.clone(), disk, BTreeMap::from([(0, Matrix::identity(P, 1))])).unwrap();
        let c = classify_map(&incl);
        assert!(c.is_cofibration && !c.is_weq);
        assert!(!acyclic_by_ranks(&mapping_cone(&incl)));
    }

    #[test]
    fn pushout_examples() {
        let a = arc(ChainComplex::disk(P, 1));
        let id = ChainMap::identity(a.clone());
        let b = arc(ChainComplex::new(
            P,
            BTreeMap::from([(0, 2), (1, 1)]),
            BTreeMap::from([(1, Matrix::from_rows(P, &[vec![1], vec![0]]))]),
        )
        .unwrap());
        let i = ChainMap::new(
            a.clone(),
            b.clone(),
            BTreeMap::from([(0, Matrix::from_rows(P, &[vec![1], vec![0]])), (1, Matrix::identity(P, 1))]),
        )
        .unwrap();
        let sq = pushout_along_cofibration(&i, &id).unwrap();
        assert_eq!(sq.object.dims(), b.dims());
        assert!(sq.from_b.is_isomorphism());
        let zero = arc(ChainComplex::zero(P));
        let pt = arc(ChainComplex::point(P, 0));
        let sq = pushout_along_cofibration(&ChainMap::zero(zero.clone(), pt.clone()), &ChainMap::zero(zero, b.clone()))
            .unwrap();
        assert_eq!(sq.object.total_dim(), b.total_dim() + 1);
        assert!(matches!(
            pushout_along_cofibration(&ChainMap::zero(b.clone(), pt.clone()), &ChainMap::identity(b)),
            Err(Error::NotCofibration { .. })
        ));
    }

    #[test]
    fn factorization_examples() {
        let pt = arc(ChainComplex::point(P, 0));
        let id = ChainMap::identity(pt.clone());
        factorize(&id).verify(&id).unwrap();
        let zero = ChainMap::zero(pt.clone(), pt.clone());
        let fac = factorize(&zero);
        fac.verify(&zero).unwrap();
        assert_eq!(HomologyView::new(&fac.object).dims(), &BTreeMap::from([(0, 1)]));
        let kc = factorize_kernel_cone(&zero);
        kc.verify(&zero).unwrap();
        let short = factorize_kernel_cone(&id);
        assert_eq!(short.cofibration, id);
        assert!(short.weq.is_identity());
    }

    #[test]
    fn shifts_and_sums() {
        let x = arc(ChainComplex::disk(3, 2));
        let s = ExactFunctor::Shift(1).on_complex(&x);
        assert_eq!(s.d(3), Matrix::from_rows(3, &[vec![2]]));
        let t = ExactFunctor::TensorVector(2).on_complex(&x);
        assert_eq!(t.total_dim(), 4);
        let empty = direct_sum(P, &[]);
        assert!(empty.object.is_zero());
    }

    #[test]
    fn sequential_colimit_of_isomorphisms() {
        let x = arc(ChainComplex::point(P, 0));
        let id = ChainMap::identity(x.clone());
        let col = sequential_colimit(&[id.clone(), id.clone(), id]).unwrap();
        assert_eq!(col.cocone.len(), 4);
        assert!(col.cocone.iter().all(ChainMap::is_identity));
    }

    #[test]
    fn chain_maps_between_points() {
        let x = arc(ChainComplex::point(P, 0));
        assert_eq!(chain_maps_basis(&x, &x).len(), 1);
        let d = arc(ChainComplex::disk(P, 1));
        // Maps F_p[0] -> disk: any value in degree 0 (d of degree 0 is zero).
        assert_eq!(chain_maps_basis(&x, &d).len(), 1);
        // Maps disk -> F_p[0]: degree-0 component must vanish on the boundary.
        assert_eq!(chain_maps_basis(&d, &x).len(), 0);
    }
}
