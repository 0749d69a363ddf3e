//! JSON file formats for categories, simplicial sets, complexes, chain maps
//! and diagrams.
//!
//! Writers emit a canonical form (sorted tables, implicit entries omitted),
//! and reading then writing a canonical file reproduces it byte for byte.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chain::{ChainComplex, ChainMap, Degree, GradedMatrix};
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Morphism, MorphismClass};
use crate::linalg::{is_prime, Matrix, MAX_PRIME};
use crate::reedy::ChainDiagram;
use crate::sset::TruncatedSSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub id: usize,
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// `compose` lists `[g, f, g∘f]`; triples with an identity factor are
/// implied and omitted by the writer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismEntry>,
    pub identities: Vec<usize>,
    pub compose: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weq: Option<Vec<usize>>,
}

impl CategoryFile {
    pub fn from_category(c: &FinCategory) -> Self {
        let morphisms = c
            .morphisms()
            .iter()
            .enumerate()
            .map(|(id, m)| MorphismEntry { id, name: m.name.clone(), src: m.src, tgt: m.tgt })
            .collect();
        let mut compose: Vec<[usize; 3]> = c
            .table()
            .iter()
            .filter(|(&(g, f), &h)| !((c.is_identity(g) && h == f) || (c.is_identity(f) && h == g)))
            .map(|(&(g, f), &h)| [g, f, h])
            .collect();
        compose.sort_unstable();
        CategoryFile {
            objects: c.objects().to_vec(),
            morphisms,
            identities: c.identities().to_vec(),
            compose,
            weq: c.weq().map(|w| w.iter().collect()),
        }
    }

    /// Shape checks only; laws are left to `validate_category`.
    pub fn to_category(&self) -> Result<FinCategory> {
        let n = self.objects.len();
        let m = self.morphisms.len();
        for (k, e) in self.morphisms.iter().enumerate() {
            if e.id != k {
                return Err(Error::Parse(format!("morphisms[{k}]: id {} is out of order", e.id)));
            }
            if e.src >= n || e.tgt >= n {
                return Err(Error::Parse(format!("morphisms[{k}] ({}): endpoint out of range", e.name)));
            }
        }
        if self.identities.len() != n {
            return Err(Error::Parse(format!("identities: expected {n} entries, found {}", self.identities.len())));
        }
        for (o, &i) in self.identities.iter().enumerate() {
            if i >= m || self.morphisms[i].src != o || self.morphisms[i].tgt != o {
                return Err(Error::Parse(format!(
                    "identities[{o}]: {i} is not an endomorphism of {}",
                    self.objects[o]
                )));
            }
        }
        let mut compose = HashMap::new();
        for (k, &[g, f, h]) in self.compose.iter().enumerate() {
            if g >= m || f >= m || h >= m {
                return Err(Error::Parse(format!("compose[{k}]: morphism id out of range")));
            }
            if compose.insert((g, f), h).is_some() {
                return Err(Error::Parse(format!("compose[{k}]: duplicate entry for ({g}, {f})")));
            }
        }
        let is_id: Vec<bool> = {
            let mut v = vec![false; m];
            self.identities.iter().for_each(|&i| v[i] = true);
            v
        };
        for g in 0..m {
            for f in 0..m {
                if self.morphisms[g].src == self.morphisms[f].tgt {
                    if is_id[g] {
                        compose.entry((g, f)).or_insert(f);
                    } else if is_id[f] {
                        compose.entry((g, f)).or_insert(g);
                    }
                }
            }
        }
        let morphisms =
            self.morphisms.iter().map(|e| Morphism { name: e.name.clone(), src: e.src, tgt: e.tgt }).collect();
        let mut c = FinCategory::from_parts(self.objects.clone(), morphisms, self.identities.clone(), compose);
        if let Some(w) = &self.weq {
            if let Some(&bad) = w.iter().find(|&&x| x >= m) {
                return Err(Error::Parse(format!("weq: morphism {bad} out of range")));
            }
            c = c.with_weq(MorphismClass::from_ids(m, w.iter().copied()));
        }
        Ok(c)
    }
}

/// `faces[n]` lists `[simplex, i, d_i simplex]` for `n >= 1` and
/// `degeneracies[n]` lists `[simplex, i, s_i simplex]` for `n < cap`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SSetFile {
    pub cap: usize,
    pub simplices: Vec<Vec<String>>,
    pub faces: Vec<Vec<[usize; 3]>>,
    pub degeneracies: Vec<Vec<[usize; 3]>>,
}

impl SSetFile {
    pub fn from_sset(k: &TruncatedSSet) -> Self {
        let triples = |table: &[Vec<Vec<usize>>]| -> Vec<Vec<[usize; 3]>> {
            table
                .iter()
                .map(|rows| {
                    rows.iter()
                        .enumerate()
                        .flat_map(|(s, row)| row.iter().enumerate().map(move |(i, &t)| [s, i, t]))
                        .collect()
                })
                .collect()
        };
        SSetFile {
            cap: k.cap(),
            simplices: (0..=k.cap()).map(|n| k.names(n).to_vec()).collect(),
            faces: triples(k.face_table()),
            degeneracies: triples(k.degen_table()),
        }
    }

    pub fn to_sset(&self) -> Result<TruncatedSSet> {
        let cap = self.cap;
        if self.simplices.len() != cap + 1 || self.faces.len() != cap + 1 || self.degeneracies.len() != cap + 1 {
            return Err(Error::Parse(format!("expected simplices, faces and degeneracies for dimensions 0..={cap}")));
        }
        let table = |what: &str,
                     entries: &[Vec<[usize; 3]>],
                     present: &dyn Fn(usize) -> bool|
         -> Result<Vec<Vec<Vec<usize>>>> {
            let mut out = Vec::new();
            for (n, level) in entries.iter().enumerate().take(cap + 1) {
                let count = self.simplices[n].len();
                let rows = if present(n) { count } else { 0 };
                let mut t = vec![vec![usize::MAX; n + 1]; rows];
                for (k, &[s, i, v]) in level.iter().enumerate() {
                    if s >= rows || i > n {
                        return Err(Error::Parse(format!("{what}[{n}][{k}]: index out of range")));
                    }
                    t[s][i] = v;
                }
                if let Some(s) = t.iter().position(|row| row.contains(&usize::MAX)) {
                    return Err(Error::Parse(format!("{what}[{n}]: missing entry for simplex {s}")));
                }
                out.push(t);
            }
            Ok(out)
        };
        let faces = table("faces", &self.faces, &|n| n > 0)?;
        let degens = table("degeneracies", &self.degeneracies, &|n| n < cap)?;
        let k = TruncatedSSet::from_tables(cap, self.simplices.clone(), faces, degens)
            .map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(v) = k.violations().first() {
            return Err(Error::Parse(format!("simplicial identity fails: {v}")));
        }
        Ok(k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixBlock {
    pub degree: Degree,
    /// Row-major entries reduced mod p.
    pub rows: Vec<Vec<u32>>,
}

/// Dimensions for degrees `lo..=hi` (empty for the zero complex) and the
/// nonzero differentials `d_n: C_n -> C_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub prime: u32,
    pub lo: Degree,
    pub hi: Degree,
    pub dims: Vec<usize>,
    pub differentials: Vec<MatrixBlock>,
}

impl MatrixBlock {
    pub fn from_matrix(degree: Degree, m: &Matrix) -> Self {
        MatrixBlock { degree, rows: (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect()).collect() }
    }

    /// Checks the shape and that entries are reduced mod `p`.
    pub fn to_matrix(&self, p: u32, rows: usize, cols: usize, what: &str) -> Result<Matrix> {
        if self.rows.len() != rows || self.rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse(format!("{what} in degree {}: expected a {rows}x{cols} matrix", self.degree)));
        }
        if let Some(v) = self.rows.iter().flatten().find(|&&v| v >= p) {
            return Err(Error::Parse(format!("{what} in degree {}: entry {v} is not reduced mod {p}", self.degree)));
        }
        if rows == 0 {
            return Ok(Matrix::zeros(p, rows, cols));
        }
        Ok(Matrix::from_rows(p, &self.rows))
    }
}

fn block_of(degree: Degree, m: &Matrix) -> MatrixBlock {
    MatrixBlock::from_matrix(degree, m)
}

fn matrix_of(p: u32, rows: usize, cols: usize, b: &MatrixBlock, what: &str) -> Result<Matrix> {
    b.to_matrix(p, rows, cols, what)
}

/// Blocks of a graded matrix, omitting empty degrees.
pub fn graded_blocks(g: &GradedMatrix) -> Vec<MatrixBlock> {
    g.blocks().iter().filter(|(_, m)| m.rows() > 0 || m.cols() > 0).map(|(&n, m)| block_of(n, m)).collect()
}

/// A graded matrix between the given homology dimensions.
pub fn graded_from_blocks(
    p: u32,
    source: &BTreeMap<Degree, usize>,
    target: &BTreeMap<Degree, usize>,
    blocks: &[MatrixBlock],
) -> Result<GradedMatrix> {
    let dim = |d: &BTreeMap<Degree, usize>, n: Degree| d.get(&n).copied().unwrap_or(0);
    let mut out = BTreeMap::new();
    for b in blocks {
        let m = matrix_of(p, dim(target, b.degree), dim(source, b.degree), b, "graded block")?;
        if out.insert(b.degree, m).is_some() {
            return Err(Error::Parse(format!("graded block in degree {} given twice", b.degree)));
        }
    }
    GradedMatrix::new(p, source.clone(), target.clone(), out).map_err(|e| Error::Parse(e.to_string()))
}

impl ComplexFile {
    pub fn from_complex(x: &ChainComplex) -> Self {
        let (lo, hi) = x.range().unwrap_or((0, -1));
        ComplexFile {
            prime: x.prime(),
            lo,
            hi,
            dims: (lo..=hi).map(|n| x.dim(n)).collect(),
            differentials: x.diffs().iter().map(|(&n, m)| block_of(n, m)).collect(),
        }
    }

    pub fn to_complex(&self) -> Result<ChainComplex> {
        let p = self.prime;
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::Parse(format!("prime: {p} is not a prime up to {MAX_PRIME}")));
        }
        let expected = if self.hi < self.lo { 0 } else { (self.hi - self.lo + 1) as usize };
        if self.dims.len() != expected {
            return Err(Error::Parse(format!(
                "dims: expected {expected} entries for degrees {}..={}",
                self.lo, self.hi
            )));
        }
        let dims: BTreeMap<Degree, usize> = (self.lo..=self.hi).zip(self.dims.iter().copied()).collect();
        let dim = |n: Degree| dims.get(&n).copied().unwrap_or(0);
        let mut diffs = BTreeMap::new();
        for b in &self.differentials {
            let m = matrix_of(p, dim(b.degree - 1), dim(b.degree), b, "differential")?;
            if diffs.insert(b.degree, m).is_some() {
                return Err(Error::Parse(format!("differential in degree {} given twice", b.degree)));
            }
        }
        ChainComplex::new(p, dims, diffs).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub source: ComplexFile,
    pub target: ComplexFile,
    pub blocks: Vec<MatrixBlock>,
}

fn blocks_of(f: &ChainMap) -> Vec<MatrixBlock> {
    f.blocks().iter().map(|(&n, m)| block_of(n, m)).collect()
}

fn map_from_blocks(source: Arc<ChainComplex>, target: Arc<ChainComplex>, blocks: &[MatrixBlock]) -> Result<ChainMap> {
    let p = source.prime();
    let mut out = BTreeMap::new();
    for b in blocks {
        let m = matrix_of(p, target.dim(b.degree), source.dim(b.degree), b, "map block")?;
        if out.insert(b.degree, m).is_some() {
            return Err(Error::Parse(format!("map block in degree {} given twice", b.degree)));
        }
    }
    ChainMap::new(source, target, out).map_err(|e| Error::Parse(e.to_string()))
}

impl MapFile {
    pub fn from_map(f: &ChainMap) -> Self {
        MapFile {
            source: ComplexFile::from_complex(&f.source),
            target: ComplexFile::from_complex(&f.target),
            blocks: blocks_of(f),
        }
    }

    pub fn to_map(&self) -> Result<ChainMap> {
        let source = Arc::new(self.source.to_complex()?);
        let target = Arc::new(self.target.to_complex()?);
        map_from_blocks(source, target, &self.blocks)
    }
}

/// A category given inline or as a path relative to the diagram file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CategoryRef {
    Path(String),
    Inline(Box<CategoryFile>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub morphism: usize,
    pub blocks: Vec<MatrixBlock>,
}

/// Values on objects and on non-identity morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub category: CategoryRef,
    pub objects: Vec<ComplexFile>,
    pub maps: Vec<MapEntry>,
}

impl DiagramFile {
    pub fn from_diagram(x: &ChainDiagram) -> Self {
        let c = &x.index;
        DiagramFile {
            category: CategoryRef::Inline(Box::new(CategoryFile::from_category(c))),
            objects: x.objects.iter().map(|o| ComplexFile::from_complex(o)).collect(),
            maps: (0..c.num_morphisms())
                .filter(|&m| !c.is_identity(m))
                .map(|m| MapEntry { morphism: m, blocks: blocks_of(&x.maps[m]) })
                .collect(),
        }
    }

    /// `base` resolves a category given by path.
    pub fn to_diagram(&self, base: Option<&Path>) -> Result<ChainDiagram> {
        let c = Arc::new(self.category.resolve(base)?);
        if self.objects.len() != c.num_objects() {
            return Err(Error::Parse(format!(
                "objects: expected {} complexes, found {}",
                c.num_objects(),
                self.objects.len()
            )));
        }
        let objects: Vec<Arc<ChainComplex>> =
            self.objects.iter().map(|o| o.to_complex().map(Arc::new)).collect::<Result<_>>()?;
        let mut maps: Vec<Option<ChainMap>> = vec![None; c.num_morphisms()];
        for &i in c.identities() {
            maps[i] = Some(ChainMap::identity(objects[c.src(i)].clone()));
        }
        for (k, e) in self.maps.iter().enumerate() {
            if e.morphism >= c.num_morphisms() || c.is_identity(e.morphism) {
                return Err(Error::Parse(format!("maps[{k}]: {} is not a non-identity morphism", e.morphism)));
            }
            let f = map_from_blocks(objects[c.src(e.morphism)].clone(), objects[c.tgt(e.morphism)].clone(), &e.blocks)
                .map_err(|err| Error::Parse(format!("maps[{k}]: {err}")))?;
            if maps[e.morphism].replace(f).is_some() {
                return Err(Error::Parse(format!("maps[{k}]: morphism {} given twice", e.morphism)));
            }
        }
        let maps: Vec<ChainMap> = maps
            .into_iter()
            .enumerate()
            .map(|(m, f)| f.ok_or_else(|| Error::Parse(format!("maps: no value for morphism {}", c.name(m)))))
            .collect::<Result<_>>()?;
        ChainDiagram::new(c, objects, maps).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl CategoryRef {
    pub fn resolve(&self, base: Option<&Path>) -> Result<FinCategory> {
        match self {
            CategoryRef::Inline(f) => f.to_category(),
            CategoryRef::Path(p) => read_category(&base.map_or_else(|| PathBuf::from(p), |b| b.join(p))),
        }
    }
}

/// Input for lifting: a free category, a complex per object and, per
/// generating arrow, a morphism between homologies in homology coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftFile {
    pub category: CategoryRef,
    pub objects: Vec<ComplexFile>,
    pub arrows: Vec<MapEntry>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Parses JSON, reporting line and column on syntax or schema errors.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file structures serialize");
    s.push('\n');
    s
}

pub fn read_category(path: &Path) -> Result<FinCategory> {
    read_json::<CategoryFile>(path)?.to_category()
}

pub fn read_sset(path: &Path) -> Result<TruncatedSSet> {
    read_json::<SSetFile>(path)?.to_sset()
}

pub fn read_complex(path: &Path) -> Result<ChainComplex> {
    read_json::<ComplexFile>(path)?.to_complex()
}

pub fn read_map(path: &Path) -> Result<ChainMap> {
    read_json::<MapFile>(path)?.to_map()
}

pub fn read_lift(path: &Path) -> Result<(LiftFile, FinCategory)> {
    let file: LiftFile = read_json(path)?;
    let c = file.category.resolve(path.parent())?;
    Ok((file, c))
}

pub fn read_diagram(path: &Path) -> Result<ChainDiagram> {
    read_json::<DiagramFile>(path)?.to_diagram(path.parent())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::validate_category;
    use crate::gen::{random_complex, random_sequence_diagram, rng, ComplexShape};
    use crate::sset::{nerve, Builtin};

    #[test]
    fn category_round_trip() {
        for c in [FinCategory::chain(2), FinCategory::zigzag(), FinCategory::square()] {
            let text = to_json(&CategoryFile::from_category(&c));
            let back = parse_json::<CategoryFile>(&text).unwrap().to_category().unwrap();
            assert!(validate_category(&back).passed());
            assert_eq!(back, c);
            assert_eq!(to_json(&CategoryFile::from_category(&back)), text);
        }
    }

    #[test]
    fn sset_round_trip() {
        for k in [nerve(&FinCategory::chain(1), 2).sset, Builtin::Spine2.build(3)] {
            let text = to_json(&SSetFile::from_sset(&k));
            let back = parse_json::<SSetFile>(&text).unwrap().to_sset().unwrap();
            assert_eq!(back, k);
            assert_eq!(to_json(&SSetFile::from_sset(&back)), text);
        }
    }

    #[test]
    fn complex_and_diagram_round_trip() {
        let mut r = rng(5);
        for _ in 0..10 {
            let x = random_complex(&mut r, 3, ComplexShape { lo: -1, hi: 2, max_dim: 3 });
            let text = to_json(&ComplexFile::from_complex(&x));
            assert_eq!(parse_json::<ComplexFile>(&text).unwrap().to_complex().unwrap(), x);
            let d = random_sequence_diagram(&mut r, 2, 2, ComplexShape::default());
            let text = to_json(&DiagramFile::from_diagram(&d));
            let back = parse_json::<DiagramFile>(&text).unwrap().to_diagram(None).unwrap();
            assert_eq!(back, d);
            assert_eq!(to_json(&DiagramFile::from_diagram(&back)), text);
        }
        let z = ChainComplex::zero(2);
        assert_eq!(
            parse_json::<ComplexFile>(&to_json(&ComplexFile::from_complex(&z))).unwrap().to_complex().unwrap(),
            z
        );
    }

    #[test]
    fn malformed_input_names_a_location() {
        let err = parse_json::<CategoryFile>("{\n  \"objects\": [\"a\"],\n  \"morphisms\": 3\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"));
        let bad = CategoryFile {
            objects: vec!["a".into()],
            morphisms: vec![],
            identities: vec![0],
            compose: vec![],
            weq: None,
        };
        assert!(matches!(bad.to_category(), Err(Error::Parse(_))));
    }
}
