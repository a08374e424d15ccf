//! Hypercubic cell complexes.
//!
//! Every cell is named by the geometric center of the unit n-cube it
//! represents. Centers have integer or half-integer entries, so we store the
//! doubled coordinate `2·x_i`: odd entries are the directions the cell spans,
//! even entries are the directions it is pinned in.
//!
//! Along a periodic direction of size `L` doubled coordinates live in
//! `0..2L` (so `-1/2` is stored as `2L - 1`). Along an open direction they
//! live in `0..=2L`: vertices `0..=L`, unit cells `1/2..=L - 1/2`.
//!
//! All enumerations are lexicographic on doubled coordinates; the position
//! of a cell in that order is its index.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::binomial;

/// Largest supported lattice dimension.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("invalid lattice: {0}")]
    InvalidLattice(&'static str),
    #[error("cube dimension {n} outside 0..={max}")]
    InvalidDimension { n: usize, max: usize },
    #[error("leaf dimension {leaf} is below node dimension {node}")]
    InvalidLeafDim { node: usize, leaf: usize },
    #[error("node is not contained in the leaf")]
    NodeNotInLeaf,
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    Open,
}

/// A set of lattice directions, bit `i` standing for direction `i` (0-based).
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirSet(u16);

impl DirSet {
    pub const EMPTY: DirSet = DirSet(0);

    pub fn from_bits(bits: u16) -> Self {
        DirSet(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn all(dim: usize) -> Self {
        DirSet(((1u32 << dim) - 1) as u16)
    }

    pub fn single(dir: usize) -> Self {
        DirSet(1 << dir)
    }

    pub fn contains(self, dir: usize) -> bool {
        self.0 >> dir & 1 == 1
    }

    pub fn insert(&mut self, dir: usize) {
        self.0 |= 1 << dir;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: DirSet) -> DirSet {
        DirSet(self.0 | other.0)
    }

    pub fn intersection(self, other: DirSet) -> DirSet {
        DirSet(self.0 & other.0)
    }

    pub fn difference(self, other: DirSet) -> DirSet {
        DirSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: DirSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement within `0..dim`.
    pub fn complement(self, dim: usize) -> DirSet {
        DirSet::all(dim).difference(self)
    }

    /// Directions in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..16).filter(move |i| bits >> i & 1 == 1)
    }

    /// The `count` smallest members (`min_count(S)`), or the whole set if it
    /// has fewer members.
    pub fn smallest(self, count: usize) -> DirSet {
        let mut out = DirSet::EMPTY;
        for dir in self.iter().take(count) {
            out.insert(dir);
        }
        out
    }

    /// All subsets of `0..dim` of the given size, in increasing bitmask order.
    pub fn subsets_of_size(dim: usize, size: usize) -> Vec<DirSet> {
        (0u32..1 << dim)
            .filter(|m| m.count_ones() as usize == size)
            .map(|m| DirSet(m as u16))
            .collect()
    }

    /// All subsets of `self` with the given size.
    pub fn subsets(self, size: usize) -> Vec<DirSet> {
        let members: Vec<usize> = self.iter().collect();
        let mut out = Vec::new();
        for mask in 0u32..1 << members.len() {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut s = DirSet::EMPTY;
            for (k, &dir) in members.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    s.insert(dir);
                }
            }
            out.push(s);
        }
        out.sort();
        out
    }
}

impl fmt::Debug for DirSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Writes 1-based direction labels: `{}`, `{1}`, `{1,3}`.
impl fmt::Display for DirSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, dir) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", dir + 1)?;
        }
        f.write_str("}")
    }
}

/// A unit n-cube, named by its doubled center coordinates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cube {
    coords: [u32; MAX_DIM],
    ndim: u8,
}

impl Cube {
    /// Builds a cube from doubled coordinates without any range reduction.
    ///
    /// # Panics
    /// Panics if more than [`MAX_DIM`] coordinates are supplied.
    pub fn new(coords: &[u32]) -> Self {
        assert!(coords.len() <= MAX_DIM, "at most {MAX_DIM} dimensions");
        let mut c = [0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Cube {
            coords: c,
            ndim: coords.len() as u8,
        }
    }

    /// Doubled center coordinates.
    pub fn coords(&self) -> &[u32] {
        &self.coords[..self.ndim as usize]
    }

    pub fn coord(&self, dir: usize) -> u32 {
        self.coords[dir]
    }

    /// Ambient lattice dimension.
    pub fn ambient_dim(&self) -> usize {
        self.ndim as usize
    }

    /// Cell dimension: the number of half-integer center coordinates.
    pub fn dim(&self) -> usize {
        self.coords().iter().filter(|&&c| c % 2 == 1).count()
    }

    /// Directions the cell extends along.
    pub fn spanned(&self) -> DirSet {
        let mut s = DirSet::EMPTY;
        for (i, &c) in self.coords().iter().enumerate() {
            if c % 2 == 1 {
                s.insert(i);
            }
        }
        s
    }

    fn with_coord(mut self, dir: usize, value: u32) -> Self {
        self.coords[dir] = value;
        self
    }
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Human-readable center, e.g. `[1/2,0,3/2]`.
impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, &c) in self.coords().iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            if c % 2 == 0 {
                write!(f, "{}", c / 2)?;
            } else {
                write!(f, "{c}/2")?;
            }
        }
        f.write_str("]")
    }
}

/// An axis-aligned subcomplex leaf: all cells spanned by `axes` and pinned to
/// the anchor's coordinates in every other direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Leaf {
    axes: DirSet,
    anchor: Cube,
}

impl Leaf {
    /// Builds a leaf through `vertex`; coordinates along `axes` are
    /// irrelevant and get zeroed so equal leaves compare equal.
    pub fn new(axes: DirSet, vertex: &Cube) -> Self {
        let mut anchor = *vertex;
        for dir in axes.iter() {
            anchor.coords[dir] = 0;
        }
        Leaf { axes, anchor }
    }

    pub fn axes(&self) -> DirSet {
        self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// A vertex contained in the leaf.
    pub fn anchor(&self) -> &Cube {
        &self.anchor
    }

    pub fn contains(&self, cube: &Cube) -> bool {
        cube.spanned().is_subset(self.axes)
            && (0..cube.ambient_dim())
                .filter(|&i| !self.axes.contains(i))
                .all(|i| cube.coord(i) == self.anchor.coord(i))
    }
}

/// One entry of a star pattern: a fixed doubled coordinate or a wildcard.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternEntry {
    Fixed(u32),
    Star,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpec {
    pub sizes: Vec<u32>,
    pub boundary: Vec<Boundary>,
}

impl LatticeSpec {
    pub fn periodic(sizes: &[u32]) -> Self {
        LatticeSpec {
            sizes: sizes.to_vec(),
            boundary: vec![Boundary::Periodic; sizes.len()],
        }
    }

    pub fn open(sizes: &[u32]) -> Self {
        LatticeSpec {
            sizes: sizes.to_vec(),
            boundary: vec![Boundary::Open; sizes.len()],
        }
    }

    /// Marks the given directions open.
    pub fn with_open(mut self, dirs: DirSet) -> Self {
        for dir in dirs.iter() {
            if dir < self.boundary.len() {
                self.boundary[dir] = Boundary::Open;
            }
        }
        self
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        if self.sizes.is_empty() {
            return Err(LatticeError::InvalidLattice("dimension must be at least 1"));
        }
        if self.sizes.len() > MAX_DIM {
            return Err(LatticeError::InvalidLattice("dimension exceeds MAX_DIM"));
        }
        if self.boundary.len() != self.sizes.len() {
            return Err(LatticeError::InvalidLattice("one boundary flag per direction required"));
        }
        for (&l, &b) in self.sizes.iter().zip(&self.boundary) {
            match b {
                Boundary::Periodic if l < 2 => {
                    return Err(LatticeError::InvalidLattice(
                        "periodic directions need at least 2 cells",
                    ))
                }
                Boundary::Open if l < 1 => {
                    return Err(LatticeError::InvalidLattice("open directions need at least 1 cell"))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// An immutable hypercubic cell complex with canonical cell indexing.
#[derive(Debug, Clone)]
pub struct Lattice {
    spec: LatticeSpec,
    by_dim: Vec<Vec<Cube>>,
}

impl Lattice {
    pub fn new(spec: LatticeSpec) -> Result<Self, LatticeError> {
        spec.validate()?;
        let dim = spec.sizes.len();
        let extents: Vec<u32> = (0..dim).map(|i| extent(&spec, i)).collect();
        let mut by_dim = vec![Vec::new(); dim + 1];
        // odometer over all doubled coordinate tuples, last direction fastest
        let mut cur = vec![0u32; dim];
        loop {
            let cube = Cube::new(&cur);
            by_dim[cube.dim()].push(cube);
            let mut i = dim;
            loop {
                if i == 0 {
                    return Ok(Lattice { spec, by_dim });
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < extents[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    pub fn periodic(sizes: &[u32]) -> Result<Self, LatticeError> {
        Lattice::new(LatticeSpec::periodic(sizes))
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.sizes.len()
    }

    pub fn sizes(&self) -> &[u32] {
        &self.spec.sizes
    }

    pub fn size(&self, dir: usize) -> u32 {
        self.spec.sizes[dir]
    }

    pub fn boundary(&self, dir: usize) -> Boundary {
        self.spec.boundary[dir]
    }

    pub fn open_dirs(&self) -> DirSet {
        let mut s = DirSet::EMPTY;
        for (i, &b) in self.spec.boundary.iter().enumerate() {
            if b == Boundary::Open {
                s.insert(i);
            }
        }
        s
    }

    pub fn is_fully_periodic(&self) -> bool {
        self.open_dirs().is_empty()
    }

    fn check_dim(&self, n: usize) -> Result<(), LatticeError> {
        if n > self.dim() {
            Err(LatticeError::InvalidDimension { n, max: self.dim() })
        } else {
            Ok(())
        }
    }

    /// All n-cubes in canonical order.
    pub fn cubes(&self, n: usize) -> Result<&[Cube], LatticeError> {
        self.check_dim(n)?;
        Ok(&self.by_dim[n])
    }

    pub fn cube_count(&self, n: usize) -> usize {
        self.by_dim.get(n).map_or(0, Vec::len)
    }

    /// Canonical index of a cube among the cubes of its dimension.
    pub fn index_of(&self, cube: &Cube) -> Option<usize> {
        if cube.ambient_dim() != self.dim() {
            return None;
        }
        self.by_dim[cube.dim()].binary_search(cube).ok()
    }

    pub fn cube_at(&self, n: usize, index: usize) -> Option<Cube> {
        self.by_dim.get(n)?.get(index).copied()
    }

    pub fn contains(&self, cube: &Cube) -> bool {
        cube.ambient_dim() == self.dim()
            && cube
                .coords()
                .iter()
                .enumerate()
                .all(|(i, &c)| c < extent(&self.spec, i))
    }

    /// Reduces signed doubled coordinates to the canonical representative.
    /// Returns `None` for points outside an open direction's range.
    pub fn normalize(&self, raw: &[i64]) -> Option<Cube> {
        if raw.len() != self.dim() {
            return None;
        }
        let mut out = [0u32; MAX_DIM];
        for (i, &v) in raw.iter().enumerate() {
            let two_l = 2 * self.spec.sizes[i] as i64;
            out[i] = match self.spec.boundary[i] {
                Boundary::Periodic => v.rem_euclid(two_l) as u32,
                Boundary::Open if (0..=two_l).contains(&v) => v as u32,
                Boundary::Open => return None,
            };
        }
        Some(Cube::new(&out[..raw.len()]))
    }

    /// Moves a cube by `delta` doubled units along `dir`, wrapping on periodic
    /// directions. `None` if the result leaves an open direction's range.
    pub fn shift(&self, cube: &Cube, dir: usize, delta: i64) -> Option<Cube> {
        let v = cube.coord(dir) as i64 + delta;
        let two_l = 2 * self.spec.sizes[dir] as i64;
        let nv = match self.spec.boundary[dir] {
            Boundary::Periodic => v.rem_euclid(two_l),
            Boundary::Open if (0..=two_l).contains(&v) => v,
            Boundary::Open => return None,
        };
        Some(cube.with_coord(dir, nv as u32))
    }

    /// `δ_d γ`: every d-cube contained in the closed cube `gamma`, in
    /// canonical order. `{gamma}` when `d = dim γ`, empty when `d > dim γ`.
    pub fn faces(&self, gamma: &Cube, d: usize) -> Result<Vec<Cube>, LatticeError> {
        self.check_dim(d)?;
        let spanned: Vec<usize> = gamma.spanned().iter().collect();
        let n = spanned.len();
        if d > n {
            return Ok(Vec::new());
        }
        let mut out = Vec::with_capacity((binomial(n, d) as usize) << (n - d));
        // each spanned direction is kept (half-integer) or collapsed to one of
        // its two bounding integer planes
        let mut choice = vec![0u8; n]; // 0 keep, 1 minus, 2 plus
        loop {
            if choice.iter().filter(|&&c| c == 0).count() == d {
                let mut cube = Some(*gamma);
                for (k, &dir) in spanned.iter().enumerate() {
                    let delta = match choice[k] {
                        0 => 0,
                        1 => -1,
                        _ => 1,
                    };
                    cube = cube.and_then(|c| self.shift(&c, dir, delta));
                }
                if let Some(c) = cube {
                    out.push(c);
                }
            }
            let mut k = 0;
            loop {
                if k == n {
                    out.sort();
                    out.dedup();
                    return Ok(out);
                }
                choice[k] += 1;
                if choice[k] < 3 {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    /// Every `d_l`-dimensional subcomplex leaf through `node`. Leaf axes are
    /// the node's own directions plus `d_l - d_n` of its pinned directions.
    pub fn leaves_through(&self, node: &Cube, d_l: usize) -> Result<Vec<Leaf>, LatticeError> {
        self.check_dim(d_l)?;
        let own = node.spanned();
        if d_l < own.len() {
            return Err(LatticeError::InvalidLeafDim {
                node: own.len(),
                leaf: d_l,
            });
        }
        let pinned = own.complement(self.dim());
        Ok(pinned
            .subsets(d_l - own.len())
            .into_iter()
            .map(|extra| Leaf::new(own.union(extra), node))
            .collect())
    }

    /// Every `d_s`-cube `γ` with `node ⊂ γ ⊂ leaf` that exists in the lattice.
    pub fn cofaces_in_leaf(
        &self,
        node: &Cube,
        d_s: usize,
        leaf: &Leaf,
    ) -> Result<Vec<Cube>, LatticeError> {
        self.check_dim(d_s)?;
        if !leaf.contains(node) {
            return Err(LatticeError::NodeNotInLeaf);
        }
        let own = node.spanned();
        if d_s < own.len() {
            return Ok(Vec::new());
        }
        let free = leaf.axes().difference(own);
        let mut out = Vec::new();
        for dirs in free.subsets(d_s - own.len()) {
            let dirs: Vec<usize> = dirs.iter().collect();
            for signs in 0u32..1 << dirs.len() {
                let mut cube = Some(*node);
                for (k, &dir) in dirs.iter().enumerate() {
                    let delta = if signs >> k & 1 == 1 { 1 } else { -1 };
                    cube = cube.and_then(|c| self.shift(&c, dir, delta));
                }
                if let Some(c) = cube {
                    out.push(c);
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Union over all legal substitutions of the `Star` entries, optionally
    /// restricted to one cell dimension.
    pub fn star_expand(
        &self,
        pattern: &[PatternEntry],
        dim: Option<usize>,
    ) -> Result<Vec<Cube>, LatticeError> {
        if pattern.len() != self.dim() {
            return Err(LatticeError::CoordinateCount {
                expected: self.dim(),
                got: pattern.len(),
            });
        }
        let matches = |c: &Cube| {
            pattern.iter().enumerate().all(|(i, p)| match *p {
                PatternEntry::Fixed(v) => c.coord(i) == v,
                PatternEntry::Star => true,
            })
        };
        let dims: Vec<usize> = match dim {
            Some(n) => {
                self.check_dim(n)?;
                vec![n]
            }
            None => (0..=self.dim()).collect(),
        };
        let mut out: Vec<Cube> = dims
            .into_iter()
            .flat_map(|n| self.by_dim[n].iter().copied().filter(|c| matches(c)))
            .collect();
        out.sort();
        Ok(out)
    }
}

fn extent(spec: &LatticeSpec, dir: usize) -> u32 {
    match spec.boundary[dir] {
        Boundary::Periodic => 2 * spec.sizes[dir],
        Boundary::Open => 2 * spec.sizes[dir] + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_formula(lat: &Lattice, n: usize) -> usize {
        binomial(lat.dim(), n) as usize * lat.sizes().iter().map(|&l| l as usize).product::<usize>()
    }

    #[test]
    fn square_torus_counts() {
        let lat = Lattice::periodic(&[4, 4]).unwrap();
        assert_eq!(lat.cube_count(0), 16);
        assert_eq!(lat.cube_count(1), 32);
        assert_eq!(lat.cube_count(2), 16);
    }

    #[test]
    fn periodic_size_one_rejected() {
        assert!(matches!(
            Lattice::periodic(&[1]),
            Err(LatticeError::InvalidLattice(_))
        ));
        assert!(Lattice::new(LatticeSpec::open(&[1])).is_ok());
        assert!(Lattice::periodic(&[]).is_err());
    }

    #[test]
    fn xcube_lattice_counts() {
        let lat = Lattice::periodic(&[2, 3, 3]).unwrap();
        assert_eq!(lat.cube_count(3), 18);
        assert_eq!(lat.cube_count(1), 54);
        for n in 0..=3 {
            assert_eq!(lat.cube_count(n), count_formula(&lat, n));
        }
    }

    #[test]
    fn out_of_range_dimension() {
        let lat = Lattice::periodic(&[3, 3]).unwrap();
        assert_eq!(
            lat.cubes(3).unwrap_err(),
            LatticeError::InvalidDimension { n: 3, max: 2 }
        );
    }

    #[test]
    fn open_lattice_ranges() {
        let lat = Lattice::new(LatticeSpec::open(&[3, 3])).unwrap();
        assert_eq!(lat.cube_count(0), 16);
        assert_eq!(lat.cube_count(1), 24);
        assert_eq!(lat.cube_count(2), 9);
    }

    #[test]
    fn index_round_trip() {
        let lat = Lattice::new(LatticeSpec::periodic(&[2, 3, 2]).with_open(DirSet::single(1))).unwrap();
        for n in 0..=3 {
            for (i, c) in lat.cubes(n).unwrap().iter().enumerate() {
                assert_eq!(lat.index_of(c), Some(i));
                assert_eq!(lat.cube_at(n, i), Some(*c));
            }
        }
    }

    #[test]
    fn face_counts_match_figure_captions() {
        let cube3 = Lattice::periodic(&[3, 3, 3]).unwrap();
        let c = cube3.cubes(3).unwrap()[0];
        assert_eq!(cube3.faces(&c, 1).unwrap().len(), 12);
        let tess = Lattice::periodic(&[2, 2, 2, 2]).unwrap();
        let c = tess.cubes(4).unwrap()[5];
        assert_eq!(tess.faces(&c, 1).unwrap().len(), 32);
        assert_eq!(tess.faces(&c, 2).unwrap().len(), 24);
        assert_eq!(tess.faces(&c, 3).unwrap().len(), 8);
        assert_eq!(tess.faces(&c, 4).unwrap(), vec![c]);
        let edge = tess.cubes(1).unwrap()[0];
        assert!(tess.faces(&edge, 2).unwrap().is_empty());
    }

    #[test]
    fn leaves_and_cofaces() {
        let lat = Lattice::periodic(&[3, 3, 3]).unwrap();
        let v = Cube::new(&[2, 4, 2]);
        let leaves = lat.leaves_through(&v, 2).unwrap();
        assert_eq!(leaves.len(), 3);
        for leaf in &leaves {
            assert_eq!(lat.cofaces_in_leaf(&v, 1, leaf).unwrap().len(), 4);
        }
        let lat4 = Lattice::periodic(&[2, 2, 2, 2]).unwrap();
        let v4 = lat4.cubes(0).unwrap()[3];
        assert_eq!(lat4.leaves_through(&v4, 2).unwrap().len(), 6);
        let e4 = lat4.cubes(1).unwrap()[7];
        assert_eq!(lat4.leaves_through(&e4, 3).unwrap().len(), 3);

        // edge node, 3-dim leaf in 3D: the four plaquettes around the edge
        let e = Cube::new(&[1, 2, 2]);
        let whole = lat.leaves_through(&e, 3).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(lat.cofaces_in_leaf(&e, 2, &whole[0]).unwrap().len(), 4);

        let sq = Lattice::periodic(&[4, 4]).unwrap();
        let v = Cube::new(&[0, 0]);
        let plane = sq.leaves_through(&v, 2).unwrap();
        assert_eq!(plane.len(), 1);
        assert_eq!(sq.cofaces_in_leaf(&v, 1, &plane[0]).unwrap().len(), 4);
    }

    #[test]
    fn leaf_errors() {
        let lat = Lattice::periodic(&[3, 3, 3]).unwrap();
        let e = Cube::new(&[1, 2, 2]);
        assert_eq!(
            lat.leaves_through(&e, 0).unwrap_err(),
            LatticeError::InvalidLeafDim { node: 1, leaf: 0 }
        );
        let other = Leaf::new(DirSet::from_bits(0b011), &Cube::new(&[0, 0, 4]));
        assert_eq!(
            lat.cofaces_in_leaf(&e, 1, &other).unwrap_err(),
            LatticeError::NodeNotInLeaf
        );
    }

    #[test]
    fn open_boundary_cofaces_are_truncated() {
        let lat = Lattice::new(LatticeSpec::open(&[2, 2])).unwrap();
        let corner = Cube::new(&[0, 0]);
        let leaf = lat.leaves_through(&corner, 2).unwrap()[0];
        assert_eq!(lat.cofaces_in_leaf(&corner, 1, &leaf).unwrap().len(), 2);
    }

    #[test]
    fn star_patterns() {
        let lat = Lattice::periodic(&[2, 3, 4]).unwrap();
        let slab = [PatternEntry::Fixed(3), PatternEntry::Star, PatternEntry::Star];
        assert_eq!(lat.star_expand(&slab, Some(3)).unwrap().len(), 12);
        let fixed = [PatternEntry::Fixed(1), PatternEntry::Fixed(2), PatternEntry::Fixed(5)];
        assert_eq!(
            lat.star_expand(&fixed, None).unwrap(),
            vec![Cube::new(&[1, 2, 5])]
        );
        let sq = Lattice::periodic(&[4, 4]).unwrap();
        let all = sq
            .star_expand(&[PatternEntry::Star, PatternEntry::Star], Some(2))
            .unwrap();
        assert_eq!(all, sq.cubes(2).unwrap());
    }

    #[test]
    fn display_uses_half_integers() {
        assert_eq!(alloc::format!("{}", Cube::new(&[1, 4, 7])), "[1/2,2,7/2]");
        assert_eq!(alloc::format!("{}", DirSet::from_bits(0b101)), "{1,3}");
    }
}
