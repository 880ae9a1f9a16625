//! Dense n-dimensional binary images.
//!
//! A [`GridImage`] stores one byte per voxel in row-major order (last axis
//! varies fastest). The operations here are the primitives the shape metrics
//! are built from: occupied volume, rounded center of mass, Euclidean
//! distance from a voxel, the enclosing radius about that voxel, one pass of
//! binary erosion with the face-adjacency cross, and the surface count that
//! erosion removes.

use crate::error::{Error, Result};

/// Largest extent accepted along any axis.
pub const MAX_EXTENT: usize = 64;

/// Dense binary occupancy grid with at least two axes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridImage {
    shape: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<u8>,
}

/// Integer voxel coordinates inside some grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VoxelIndex(Vec<usize>);

impl VoxelIndex {
    pub fn new(coords: Vec<usize>) -> Self {
        VoxelIndex(coords)
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn ndim(&self) -> usize {
        self.0.len()
    }

    fn check_in(&self, shape: &[usize]) -> Result<()> {
        let ok = self.0.len() == shape.len() && self.0.iter().zip(shape).all(|(c, e)| c < e);
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                coords: self.0.clone(),
                shape: shape.to_vec(),
            })
        }
    }
}

impl From<Vec<usize>> for VoxelIndex {
    fn from(coords: Vec<usize>) -> Self {
        VoxelIndex(coords)
    }
}

/// Result of [`GridImage::min_enclosing_radius`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnclosingRadius {
    /// Ceiling of `max_distance`, clamped to at least 1.
    pub radius: u32,
    /// Largest Euclidean distance from the center to an occupied voxel.
    pub max_distance: f64,
    /// Set when the object is a single voxel at the center, so the raw
    /// ceiling was 0 and `radius` was clamped to 1.
    pub degenerate: bool,
}

/// Euclidean distance of every voxel from one reference voxel.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    shape: Vec<usize>,
    strides: Vec<usize>,
    values: Vec<f64>,
}

impl DistanceField {
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, coords: &[usize]) -> Option<f64> {
        flat_index(&self.shape, &self.strides, coords).map(|i| self.values[i])
    }
}

fn row_major_strides(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for axis in (0..shape.len().saturating_sub(1)).rev() {
        strides[axis] = strides[axis + 1] * shape[axis + 1];
    }
    strides
}

fn flat_index(shape: &[usize], strides: &[usize], coords: &[usize]) -> Option<usize> {
    if coords.len() != shape.len() {
        return None;
    }
    let mut idx = 0;
    for ((&c, &e), &s) in coords.iter().zip(shape).zip(strides) {
        if c >= e {
            return None;
        }
        idx += c * s;
    }
    Some(idx)
}

fn checked_cells(shape: &[usize]) -> Result<usize> {
    if shape.len() < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 axes, got {}",
            shape.len()
        )));
    }
    if let Some(&e) = shape.iter().find(|&&e| e == 0 || e > MAX_EXTENT) {
        return Err(Error::InvalidGrid(format!(
            "axis extent {e} outside 1..={MAX_EXTENT}"
        )));
    }
    shape
        .iter()
        .try_fold(1usize, |acc, &e| acc.checked_mul(e))
        .ok_or_else(|| Error::InvalidGrid(format!("shape {shape:?} overflows")))
}

/// Walks every coordinate of `shape` in row-major order.
struct CoordCursor {
    shape: Vec<usize>,
    coords: Vec<usize>,
}

impl CoordCursor {
    fn new(shape: &[usize]) -> Self {
        CoordCursor {
            shape: shape.to_vec(),
            coords: vec![0; shape.len()],
        }
    }

    fn advance(&mut self) {
        for axis in (0..self.shape.len()).rev() {
            self.coords[axis] += 1;
            if self.coords[axis] < self.shape[axis] {
                return;
            }
            self.coords[axis] = 0;
        }
    }
}

fn ceil_sqrt(value: u64) -> u64 {
    let mut root = (value as f64).sqrt() as u64;
    while root * root > value {
        root -= 1;
    }
    while root * root < value {
        root += 1;
    }
    root
}

impl GridImage {
    /// Builds an image from a row-major 0/1 buffer.
    pub fn new(shape: Vec<usize>, data: Vec<u8>) -> Result<Self> {
        let cells = checked_cells(&shape)?;
        if data.len() != cells {
            return Err(Error::InvalidGrid(format!(
                "data has {} cells, shape {shape:?} needs {cells}",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|&&v| v > 1) {
            return Err(Error::InvalidGrid(format!("cell value {v} is not 0 or 1")));
        }
        let strides = row_major_strides(&shape);
        Ok(GridImage {
            shape,
            strides,
            data,
        })
    }

    pub fn zeros(shape: Vec<usize>) -> Result<Self> {
        let cells = checked_cells(&shape)?;
        Self::new(shape, vec![0; cells])
    }

    /// Builds an image by evaluating `occupied` at every coordinate.
    pub fn from_fn<F>(shape: Vec<usize>, mut occupied: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> bool,
    {
        let cells = checked_cells(&shape)?;
        let mut data = Vec::with_capacity(cells);
        let mut cursor = CoordCursor::new(&shape);
        for _ in 0..cells {
            data.push(u8::from(occupied(&cursor.coords)));
            cursor.advance();
        }
        Self::new(shape, data)
    }

    /// Builds an image with exactly the listed voxels set.
    pub fn from_voxels<C: AsRef<[usize]>>(shape: Vec<usize>, voxels: &[C]) -> Result<Self> {
        let mut image = Self::zeros(shape)?;
        for v in voxels {
            image.set(v.as_ref(), true)?;
        }
        Ok(image)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn ndim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn index_of(&self, coords: &[usize]) -> Option<usize> {
        flat_index(&self.shape, &self.strides, coords)
    }

    pub fn get(&self, coords: &[usize]) -> Option<bool> {
        self.index_of(coords).map(|i| self.data[i] == 1)
    }

    pub fn set(&mut self, coords: &[usize], value: bool) -> Result<()> {
        let i = self.index_of(coords).ok_or_else(|| Error::OutOfBounds {
            coords: coords.to_vec(),
            shape: self.shape.clone(),
        })?;
        self.data[i] = u8::from(value);
        Ok(())
    }

    pub(crate) fn set_flat(&mut self, index: usize) {
        self.data[index] = 1;
    }

    /// Coordinates of every occupied voxel, in row-major order.
    pub fn occupied(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cursor = CoordCursor::new(&self.shape);
        for &cell in &self.data {
            if cell == 1 {
                out.push(cursor.coords.clone());
            }
            cursor.advance();
        }
        out
    }

    /// Number of occupied voxels.
    pub fn volume(&self) -> usize {
        self.data.iter().filter(|&&v| v == 1).count()
    }

    /// Mean coordinate of the occupied voxels, rounded half away from zero
    /// per axis and clamped into the grid.
    pub fn center_of_mass(&self) -> Result<VoxelIndex> {
        let n = self.ndim();
        let mut sums = vec![0u64; n];
        let mut count = 0u64;
        let mut cursor = CoordCursor::new(&self.shape);
        for &cell in &self.data {
            if cell == 1 {
                count += 1;
                for (s, &c) in sums.iter_mut().zip(&cursor.coords) {
                    *s += c as u64;
                }
            }
            cursor.advance();
        }
        if count == 0 {
            return Err(Error::EmptyImage);
        }
        let coords = sums
            .iter()
            .zip(&self.shape)
            .map(|(&s, &e)| {
                let mean = s as f64 / count as f64;
                (mean.round() as usize).min(e - 1)
            })
            .collect();
        Ok(VoxelIndex(coords))
    }

    /// Ceiling of the largest Euclidean distance from `center` to an
    /// occupied voxel. A zero result is clamped to 1 and flagged.
    pub fn min_enclosing_radius(&self, center: &VoxelIndex) -> Result<EnclosingRadius> {
        center.check_in(&self.shape)?;
        let c = center.coords();
        let mut max_sq: Option<u64> = None;
        let mut cursor = CoordCursor::new(&self.shape);
        for &cell in &self.data {
            if cell == 1 {
                let d2: u64 = cursor
                    .coords
                    .iter()
                    .zip(c)
                    .map(|(&a, &b)| {
                        let d = a.abs_diff(b) as u64;
                        d * d
                    })
                    .sum();
                max_sq = Some(max_sq.map_or(d2, |m| m.max(d2)));
            }
            cursor.advance();
        }
        let max_sq = max_sq.ok_or(Error::EmptyImage)?;
        let raw = ceil_sqrt(max_sq);
        Ok(EnclosingRadius {
            radius: raw.max(1) as u32,
            max_distance: (max_sq as f64).sqrt(),
            degenerate: raw == 0,
        })
    }

    /// One pass of binary erosion with the 2n face-neighbour cross.
    /// Voxels outside the grid count as background.
    pub fn erode(&self) -> GridImage {
        let mut out = vec![0u8; self.data.len()];
        let mut cursor = CoordCursor::new(&self.shape);
        for (i, &cell) in self.data.iter().enumerate() {
            if cell == 1 {
                let keep = cursor
                    .coords
                    .iter()
                    .zip(&self.shape)
                    .zip(&self.strides)
                    .all(|((&c, &e), &s)| {
                        c > 0 && c + 1 < e && self.data[i - s] == 1 && self.data[i + s] == 1
                    });
                out[i] = u8::from(keep);
            }
            cursor.advance();
        }
        GridImage {
            shape: self.shape.clone(),
            strides: self.strides.clone(),
            data: out,
        }
    }

    /// Voxels removed by one erosion pass: `volume - volume(erode)`.
    pub fn surface_count(&self) -> Result<usize> {
        let volume = self.volume();
        if volume == 0 {
            return Err(Error::EmptyImage);
        }
        Ok(volume - self.erode().volume())
    }

    /// Reorders axes so that output axis `k` is input axis `perm[k]`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<GridImage> {
        let n = self.ndim();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidInput(format!(
                "{perm:?} is not a permutation of 0..{n}"
            )));
        }
        let shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let mut src = vec![0; n];
        GridImage::from_fn(shape, |dst| {
            for (k, &p) in perm.iter().enumerate() {
                src[p] = dst[k];
            }
            self.get(&src).unwrap_or(false)
        })
    }

    /// Copies this image into a zero grid of `shape`, shifted by `offset`.
    pub fn embed(&self, shape: Vec<usize>, offset: &[usize]) -> Result<GridImage> {
        if shape.len() != self.ndim() || offset.len() != self.ndim() {
            return Err(Error::InvalidInput("embedding rank mismatch".into()));
        }
        if self
            .shape
            .iter()
            .zip(offset)
            .zip(&shape)
            .any(|((&e, &o), &t)| e + o > t)
        {
            return Err(Error::InvalidInput(format!(
                "shape {:?} shifted by {offset:?} does not fit in {shape:?}",
                self.shape
            )));
        }
        let mut out = GridImage::zeros(shape)?;
        for v in self.occupied() {
            let shifted: Vec<usize> = v.iter().zip(offset).map(|(a, b)| a + b).collect();
            out.set(&shifted, true)?;
        }
        Ok(out)
    }
}

/// Euclidean distance from `center` to every voxel of a grid of `shape`.
pub fn distance_field(shape: &[usize], center: &VoxelIndex) -> Result<DistanceField> {
    let cells = checked_cells(shape)?;
    center.check_in(shape)?;
    let c = center.coords();
    let mut values = Vec::with_capacity(cells);
    let mut cursor = CoordCursor::new(shape);
    for _ in 0..cells {
        let d2: f64 = cursor
            .coords
            .iter()
            .zip(c)
            .map(|(&a, &b)| {
                let d = a as f64 - b as f64;
                d * d
            })
            .sum();
        values.push(d2.sqrt());
        cursor.advance();
    }
    Ok(DistanceField {
        shape: shape.to_vec(),
        strides: row_major_strides(shape),
        values,
    })
}
