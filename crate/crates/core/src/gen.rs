//! Seeded random inputs: complexes, chain maps, direct categories and
//! Reedy cofibrant diagrams.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{chain_maps_basis, ChainComplex, ChainMap, Degree};
use crate::fincat::{direct_structure, FinCategory, Morphism};
use crate::linalg::Matrix;
use crate::reedy::{ChainDiagram, Latching};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for case `case` of a run seeded with `seed`.
pub fn case_rng(seed: u64, case: u64) -> Rng64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(case);
    r
}

pub fn random_matrix<R: Rng>(rng: &mut R, p: u32, rows: usize, cols: usize) -> Matrix {
    let entries: Vec<u32> = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
    Matrix::from_entries(p, rows, cols, &entries)
}

/// Size limits for random complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexShape {
    pub lo: Degree,
    pub hi: Degree,
    pub max_dim: usize,
}

impl Default for ComplexShape {
    fn default() -> Self {
        ComplexShape { lo: 0, hi: 2, max_dim: 2 }
    }
}

/// A complex with `d_n = ker(d_{n-1}) · R` for random `R`.
pub fn random_complex<R: Rng>(rng: &mut R, p: u32, shape: ComplexShape) -> ChainComplex {
    let dims: BTreeMap<Degree, usize> = (shape.lo..=shape.hi).map(|n| (n, rng.gen_range(0..=shape.max_dim))).collect();
    let mut diffs = BTreeMap::new();
    let mut prev = Matrix::zeros(p, 0, dims[&shape.lo]);
    for n in shape.lo + 1..=shape.hi {
        let cycles = prev.kernel();
        let d = cycles.mul(&random_matrix(rng, p, cycles.cols(), dims[&n]));
        diffs.insert(n, d.clone());
        prev = d;
    }
    ChainComplex::new(p, dims, diffs).expect("generated differentials square to zero")
}

/// A uniformly random chain map `X -> Y`.
pub fn random_chain_map<R: Rng>(rng: &mut R, x: &Arc<ChainComplex>, y: &Arc<ChainComplex>) -> ChainMap {
    let p = x.prime();
    chain_maps_basis(x, y)
        .into_iter()
        .fold(ChainMap::zero(x.clone(), y.clone()), |acc, b| acc.add(&b.scale(rng.gen_range(0..p))))
}

pub fn random_map<R: Rng>(rng: &mut R, p: u32, shape: ComplexShape) -> ChainMap {
    let x = Arc::new(random_complex(rng, p, shape));
    let y = Arc::new(random_complex(rng, p, shape));
    random_chain_map(rng, &x, &y)
}

/// A random quasi-isomorphism `X -> X ⊕ D` with `D` a sum of disks: the
/// summand inclusion plus a random chain map into `D`.
pub fn random_quasi_iso<R: Rng>(rng: &mut R, p: u32, shape: ComplexShape) -> ChainMap {
    let x = Arc::new(random_complex(rng, p, shape));
    let disks: Vec<Arc<ChainComplex>> = (0..rng.gen_range(0..=2))
        .map(|_| Arc::new(ChainComplex::disk(p, rng.gen_range(shape.lo + 1..=shape.hi.max(shape.lo + 1)))))
        .collect();
    let mut parts = vec![x.clone()];
    parts.extend(disks);
    let sum = crate::chain::direct_sum(p, &parts);
    parts[1..]
        .iter()
        .enumerate()
        .map(|(k, d)| sum.injections[k + 1].after(&random_chain_map(rng, &x, d)))
        .fold(sum.injections[0].clone(), |acc, g| acc.add(&g))
}

/// A random direct category on at most `max_objects` objects: either a
/// random poset or the free category on a random acyclic quiver.
pub fn random_direct_category<R: Rng>(rng: &mut R, max_objects: usize) -> FinCategory {
    let n = rng.gen_range(1..=max_objects.max(1));
    let names: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
    if rng.gen_bool(0.5) {
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
            for cell in row.iter_mut().skip(i + 1) {
                *cell = rng.gen_bool(0.4);
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rel[i][k] && rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
        FinCategory::poset(names, |i, j| rel[i][j])
    } else {
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                // Keep path counts small.
                if rng.gen_bool(0.3) {
                    arrows.push(Morphism { name: format!("a{}", arrows.len()), src: i, tgt: j });
                }
            }
        }
        FinCategory::free(names, arrows).expect("acyclic quivers generate finite categories")
    }
}

/// A Reedy cofibrant diagram on a direct category: each value is
/// `L_j X ⊕ R_j` with differential twisted by `d_L t - t d_R`, and the
/// structure maps factor through the summand inclusion of `L_j X`.
///
/// Returns `None` when the total dimension exceeds `max_total`.
pub fn random_reedy_cofibrant<R: Rng>(
    rng: &mut R,
    index: &Arc<FinCategory>,
    p: u32,
    shape: ComplexShape,
    max_total: usize,
) -> Option<ChainDiagram> {
    let order = direct_structure(index).ok()?.order();
    let mut objects: Vec<Option<Arc<ChainComplex>>> = vec![None; index.num_objects()];
    let mut maps: Vec<Option<ChainMap>> = vec![None; index.num_morphisms()];
    let mut total = 0;
    for &j in &order {
        let placeholder = Arc::new(ChainComplex::zero(p));
        let lat = Latching::build(
            index,
            j,
            &|a| objects[a].clone().expect("lower degree"),
            &|m| maps[m].clone().expect("lower degree"),
            &|u| ChainMap::zero(objects[index.src(u)].clone().unwrap(), placeholder.clone()),
            placeholder.clone(),
        );
        let l = &lat.object;
        let r = random_complex(rng, p, shape);
        let degrees: Vec<Degree> =
            l.degrees().into_iter().chain(r.degrees()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let t: BTreeMap<Degree, Matrix> =
            degrees.iter().map(|&n| (n, random_matrix(rng, p, l.dim(n), r.dim(n)))).collect();
        let tn = |n: Degree| t.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(p, l.dim(n), r.dim(n)));
        let mut dims = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for &n in degrees.iter().chain(degrees.iter().map(|n| n + 1).collect::<Vec<_>>().iter()) {
            dims.insert(n, l.dim(n) + r.dim(n));
            let mut d = Matrix::zeros(p, l.dim(n - 1) + r.dim(n - 1), l.dim(n) + r.dim(n));
            d.paste(0, 0, &l.d(n));
            d.paste(0, l.dim(n), &l.d(n).mul(&tn(n)).sub(&tn(n - 1).mul(&r.d(n))));
            d.paste(l.dim(n - 1), l.dim(n), &r.d(n));
            diffs.insert(n, d);
        }
        let x = Arc::new(ChainComplex::new(p, dims, diffs).expect("twisted differential squares to zero"));
        total += x.total_dim();
        if total > max_total {
            return None;
        }
        let mut incl = BTreeMap::new();
        for n in l.degrees() {
            let mut m = Matrix::zeros(p, x.dim(n), l.dim(n));
            m.paste(0, 0, &Matrix::identity(p, l.dim(n)));
            incl.insert(n, m);
        }
        let incl = ChainMap::new(l.clone(), x.clone(), incl).expect("summand inclusion is a chain map");
        for &m in index.incoming(j) {
            maps[m] = Some(if index.is_identity(m) {
                ChainMap::identity(x.clone())
            } else {
                incl.after(&lat.cocone[lat.position(m).unwrap()])
            });
        }
        objects[j] = Some(x);
    }
    let objects: Vec<Arc<ChainComplex>> = objects.into_iter().map(Option::unwrap).collect();
    let maps = maps.into_iter().map(Option::unwrap).collect();
    Some(ChainDiagram::new(index.clone(), objects, maps).expect("generated diagrams are functors"))
}

/// Retries [`random_reedy_cofibrant`] with shrinking shapes until the
/// dimension bound is met.
pub fn reedy_cofibrant_within<R: Rng>(rng: &mut R, index: &Arc<FinCategory>, p: u32, max_total: usize) -> ChainDiagram {
    let mut shape = ComplexShape { lo: 0, hi: 1, max_dim: 2 };
    for attempt in 0.. {
        if let Some(x) = random_reedy_cofibrant(rng, index, p, shape, max_total) {
            return x;
        }
        if attempt % 4 == 3 && shape.max_dim > 0 {
            shape.max_dim -= 1;
        }
    }
    unreachable!()
}

/// A random diagram on `[n]` from consecutive random chain maps.
pub fn random_sequence_diagram<R: Rng>(rng: &mut R, p: u32, n: usize, shape: ComplexShape) -> ChainDiagram {
    let complexes: Vec<Arc<ChainComplex>> = (0..=n).map(|_| Arc::new(random_complex(rng, p, shape))).collect();
    let maps: Vec<ChainMap> = complexes.windows(2).map(|w| random_chain_map(rng, &w[0], &w[1])).collect();
    if maps.is_empty() {
        return ChainDiagram::constant(Arc::new(FinCategory::chain(0)), complexes[0].clone());
    }
    ChainDiagram::from_sequence(&maps).expect("consecutive maps are composable")
}

/// Picks one element uniformly.
pub fn pick<'a, T, R: Rng>(rng: &mut R, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("nonempty choice")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::HomologyView;
    use crate::fincat::{is_direct, validate_category};
    use crate::reedy::reedy_status;

    #[test]
    fn random_complexes_are_complexes() {
        let mut r = rng(1);
        for _ in 0..50 {
            let c = random_complex(&mut r, 3, ComplexShape { lo: -1, hi: 2, max_dim: 3 });
            assert!(ChainComplex::new(3, c.dims().clone(), c.diffs().clone()).is_ok());
        }
    }

    #[test]
    fn random_quasi_isos_are_quasi_isos() {
        let mut r = rng(2);
        for _ in 0..30 {
            let f = random_quasi_iso(&mut r, 2, ComplexShape::default());
            assert!(f.is_valid());
            assert!(f.is_quasi_isomorphism());
            assert_eq!(HomologyView::new(&f.source).dims(), HomologyView::new(&f.target).dims());
        }
    }

    #[test]
    fn random_reedy_diagrams() {
        let mut r = rng(3);
        for _ in 0..10 {
            let c = Arc::new(random_direct_category(&mut r, 5));
            assert!(validate_category(&c).passed());
            assert!(is_direct(&c).is_some());
            let x = reedy_cofibrant_within(&mut r, &c, 2, 12);
            assert!(x.objects.iter().map(|o| o.total_dim()).sum::<usize>() <= 12);
            assert!(reedy_status(&x).unwrap().is_cofibrant());
        }
    }

    #[test]
    fn streams_are_deterministic() {
        let a: Vec<u32> = (0..5).map(|_| case_rng(7, 3).gen()).collect();
        let b: Vec<u32> = (0..5).map(|_| case_rng(7, 3).gen()).collect();
        assert_eq!(a, b);
    }
}
