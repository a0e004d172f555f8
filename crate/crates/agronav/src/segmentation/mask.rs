//! Per-pixel class-id rasters and their on-disk PNG form.

use std::path::Path;

use image::{GrayImage, RgbImage};

use super::taxonomy::Taxonomy;
use super::SegmentationError;
use crate::geometry::ImageDims;

/// A row-major raster of class ids under a taxonomy.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMask {
    dims: ImageDims,
    taxonomy: Taxonomy,
    data: Vec<u8>,
}

impl ClassMask {
    /// Wrap a raw raster, validating length and ids.
    pub fn new(
        dims: ImageDims,
        taxonomy: &Taxonomy,
        data: Vec<u8>,
    ) -> Result<Self, SegmentationError> {
        if data.len() != dims.pixel_count() {
            return Err(SegmentationError::BadRasterLength {
                expected: dims.pixel_count(),
                found: data.len(),
            });
        }
        for (index, &id) in data.iter().enumerate() {
            if !taxonomy.contains_id(id) {
                return Err(SegmentationError::InvalidLabel {
                    value: id,
                    index,
                    taxonomy: taxonomy.name().to_string(),
                });
            }
        }
        Ok(Self {
            dims,
            taxonomy: taxonomy.clone(),
            data,
        })
    }

    /// A mask with every pixel set to `id`.
    pub fn filled(dims: ImageDims, taxonomy: &Taxonomy, id: u8) -> Result<Self, SegmentationError> {
        if !taxonomy.contains_id(id) {
            return Err(SegmentationError::InvalidLabel {
                value: id,
                index: 0,
                taxonomy: taxonomy.name().to_string(),
            });
        }
        Ok(Self {
            dims,
            taxonomy: taxonomy.clone(),
            data: vec![id; dims.pixel_count()],
        })
    }

    pub fn dims(&self) -> &ImageDims {
        &self.dims
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.data[y as usize * self.dims.width() as usize + x as usize]
    }

    pub(crate) fn set(&mut self, x: u32, y: u32, id: u8) {
        debug_assert!(self.taxonomy.contains_id(id));
        self.data[y as usize * self.dims.width() as usize + x as usize] = id;
    }

    /// Per-class pixel counts, indexed by class id.
    pub fn histogram(&self) -> Vec<usize> {
        let mut hist = vec![0usize; self.taxonomy.len()];
        for &id in &self.data {
            hist[id as usize] += 1;
        }
        hist
    }

    /// Render the mask as an RGB image using the taxonomy colors.
    pub fn colorize(&self) -> RgbImage {
        let mut img = RgbImage::new(self.dims.width(), self.dims.height());
        for (pixel, &id) in img.pixels_mut().zip(&self.data) {
            pixel.0 = self.taxonomy.color_of(id).unwrap();
        }
        img
    }
}

/// Decode a mask from 8-bit single-channel PNG bytes.
pub fn mask_from_png_bytes(
    bytes: &[u8],
    taxonomy: &Taxonomy,
) -> Result<ClassMask, SegmentationError> {
    let decoded = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| SegmentationError::MaskFormat(e.to_string()))?;
    let gray = match decoded {
        image::DynamicImage::ImageLuma8(g) => g,
        other => {
            return Err(SegmentationError::MaskFormat(format!(
                "expected 8-bit single-channel PNG, got {:?}",
                other.color()
            )))
        }
    };
    mask_from_gray(gray, taxonomy)
}

fn mask_from_gray(gray: GrayImage, taxonomy: &Taxonomy) -> Result<ClassMask, SegmentationError> {
    let dims = ImageDims::new(gray.width(), gray.height())
        .map_err(|e| SegmentationError::MaskFormat(e.to_string()))?;
    ClassMask::new(dims, taxonomy, gray.into_raw())
}

/// Load a mask from an 8-bit single-channel PNG file.
pub fn load_mask(path: &Path, taxonomy: &Taxonomy) -> Result<ClassMask, SegmentationError> {
    let bytes = std::fs::read(path).map_err(|e| SegmentationError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    mask_from_png_bytes(&bytes, taxonomy)
}

/// Write a mask as an 8-bit single-channel PNG file.
pub fn save_mask(mask: &ClassMask, path: &Path) -> Result<(), SegmentationError> {
    let img = GrayImage::from_raw(
        mask.dims().width(),
        mask.dims().height(),
        mask.data().to_vec(),
    )
    .expect("raster length is validated at construction");
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| SegmentationError::Io {
            path: path.display().to_string(),
            source: std::io::Error::new(std::io::ErrorKind::Other, e),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_round_trip() {
        let tax = Taxonomy::agronav8();
        let dims = ImageDims::new(13, 7).unwrap();
        let data: Vec<u8> = (0..dims.pixel_count()).map(|i| (i % 8) as u8).collect();
        let mask = ClassMask::new(dims, tax, data).unwrap();

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mask.png");
        save_mask(&mask, &path).unwrap();
        let loaded = load_mask(&path, tax).unwrap();
        assert_eq!(mask, loaded);
    }

    #[test]
    fn invalid_id_is_reported_with_position() {
        let tax = Taxonomy::agronav8();
        let dims = ImageDims::new(2, 2).unwrap();
        let err = ClassMask::new(dims, tax, vec![0, 1, 12, 2]).unwrap_err();
        match err {
            SegmentationError::InvalidLabel { value, index, .. } => {
                assert_eq!(value, 12);
                assert_eq!(index, 2);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn histogram_counts() {
        let tax = Taxonomy::agronav8();
        let dims = ImageDims::new(2, 2).unwrap();
        let mask = ClassMask::new(dims, tax, vec![0, 1, 1, 2]).unwrap();
        let hist = mask.histogram();
        assert_eq!(hist[0], 1);
        assert_eq!(hist[1], 2);
        assert_eq!(hist[2], 1);
        assert_eq!(hist[3..].iter().sum::<usize>(), 0);
    }

    #[test]
    fn rgb_png_is_rejected() {
        let img = RgbImage::new(4, 4);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rgb.png");
        img.save(&path).unwrap();
        let err = load_mask(&path, Taxonomy::agronav8()).unwrap_err();
        assert!(matches!(err, SegmentationError::MaskFormat(_)));
    }
}
