//! Shape proportion and sphericity of binary images.
//!
//! For an image with `V` occupied voxels the center is the rounded center of
//! mass, `r` is the ceiling of the farthest occupied voxel's distance from it,
//! and `S` is the number of voxels removed by one erosion pass. Then
//!
//! * shape proportion `sp = V / ball_volume(n, r)`
//! * sphericity `γ = nV / (rS)`
//!
//! Neither value is clamped. On coarse grids the integer radius and voxel
//! count can push `sp` above 1.

use crate::analytic::ball_volume;
use crate::binning::{bin_points, BinningSpec, PointCloud};
use crate::error::Result;
use crate::grid::{EnclosingRadius, GridImage};

/// Every quantity measured on one image.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeMetrics {
    pub n: usize,
    pub volume: usize,
    pub radius: u32,
    pub surface: usize,
    pub sp: f64,
    pub sphericity: f64,
    pub degenerate_radius: bool,
    /// True when erosion removed every voxel, i.e. `surface == volume`.
    pub erosion_empty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpEstimate {
    pub sp: f64,
    pub radius: u32,
    pub volume: usize,
    pub degenerate_radius: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericityEstimate {
    pub sphericity: f64,
    pub surface: usize,
    pub erosion_empty: bool,
}

fn enclosing(b: &GridImage) -> Result<EnclosingRadius> {
    let center = b.center_of_mass()?;
    b.min_enclosing_radius(&center)
}

fn sp_with(b: &GridImage, r: &EnclosingRadius) -> SpEstimate {
    let volume = b.volume();
    SpEstimate {
        sp: volume as f64 / ball_volume(b.ndim(), r.radius as f64),
        radius: r.radius,
        volume,
        degenerate_radius: r.degenerate,
    }
}

fn sphericity_with(b: &GridImage, r: &EnclosingRadius) -> Result<SphericityEstimate> {
    let volume = b.volume();
    let surface = b.surface_count()?;
    Ok(SphericityEstimate {
        sphericity: (b.ndim() * volume) as f64 / (r.radius as f64 * surface as f64),
        surface,
        erosion_empty: surface == volume,
    })
}

pub fn sp_from_image(b: &GridImage) -> Result<SpEstimate> {
    let r = enclosing(b)?;
    Ok(sp_with(b, &r))
}

pub fn sphericity_from_image(b: &GridImage) -> Result<SphericityEstimate> {
    let r = enclosing(b)?;
    sphericity_with(b, &r)
}

/// Both metrics from one center and radius computation.
pub fn measure(b: &GridImage) -> Result<ShapeMetrics> {
    let r = enclosing(b)?;
    let sp = sp_with(b, &r);
    let sph = sphericity_with(b, &r)?;
    Ok(ShapeMetrics {
        n: b.ndim(),
        volume: sp.volume,
        radius: sp.radius,
        surface: sph.surface,
        sp: sp.sp,
        sphericity: sph.sphericity,
        degenerate_radius: sp.degenerate_radius,
        erosion_empty: sph.erosion_empty,
    })
}

/// Bins the points and measures the resulting image.
pub fn analyze(points: &PointCloud, spec: &BinningSpec) -> Result<ShapeMetrics> {
    measure(&bin_points(points, spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use std::f64::consts::PI;

    fn plus_3x3() -> GridImage {
        GridImage::from_voxels(vec![3, 3], &[[1, 1], [0, 1], [2, 1], [1, 0], [1, 2]]).unwrap()
    }

    #[test]
    fn full_square() {
        let b = GridImage::from_fn(vec![3, 3], |_| true).unwrap();
        let m = measure(&b).unwrap();
        assert_eq!((m.volume, m.radius, m.surface), (9, 2, 8));
        assert!((m.sp - 9.0 / (4.0 * PI)).abs() < 1e-14);
        assert!((m.sphericity - 1.125).abs() < 1e-15);
        assert!(!m.erosion_empty);
    }

    #[test]
    fn plus_shape() {
        let sp = sp_from_image(&plus_3x3()).unwrap();
        assert_eq!((sp.volume, sp.radius), (5, 1));
        assert!((sp.sp - 5.0 / PI).abs() < 1e-14);
        let g = sphericity_from_image(&plus_3x3()).unwrap();
        assert_eq!(g.surface, 4);
        assert!((g.sphericity - 2.5).abs() < 1e-15);
    }

    #[test]
    fn single_voxel_is_flagged() {
        let b = GridImage::from_voxels(vec![4, 4], &[[2, 1]]).unwrap();
        let m = measure(&b).unwrap();
        assert!(m.degenerate_radius && m.erosion_empty);
        assert_eq!(m.radius, 1);
        assert!((m.sp - 1.0 / PI).abs() < 1e-15);
        assert_eq!(m.sphericity, 2.0);
    }

    #[test]
    fn empty_image_is_rejected() {
        let b = GridImage::zeros(vec![3, 3]).unwrap();
        assert_eq!(measure(&b), Err(Error::EmptyImage));
        assert_eq!(sp_from_image(&b), Err(Error::EmptyImage));
        assert_eq!(sphericity_from_image(&b), Err(Error::EmptyImage));
    }

    #[test]
    fn four_d_thin_shell_gives_n_over_r() {
        // sparse 4-D set whose erosion is empty and whose radius is 6
        let b = GridImage::from_voxels(
            vec![7, 7, 7, 7],
            &[
                [0, 0, 0, 0],
                [6, 6, 6, 6],
                [3, 3, 3, 3],
                [0, 6, 0, 6],
                [6, 0, 6, 0],
            ],
        )
        .unwrap();
        let m = measure(&b).unwrap();
        assert_eq!(m.radius, 6);
        assert!(m.erosion_empty);
        assert!((m.sphericity - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn analyze_two_identical_points() {
        let pts = PointCloud::from_rows(&[[0.2, 0.7], [0.2, 0.7]]).unwrap();
        let spec = BinningSpec::new(4).with_ranges(vec![(0.0, 1.0); 2]);
        let m = analyze(&pts, &spec).unwrap();
        assert_eq!(m.volume, 1);
        assert!(m.degenerate_radius);
    }
}
