//! Reading and writing feature files.

use std::path::Path;

use site_core::{FeatureMatrix, LabelVector};

use crate::error::{Error, Result};
use crate::fsio;
use crate::sitb;

pub fn write_features(features: &FeatureMatrix, labels: &LabelVector, path: &Path) -> Result<()> {
    let bytes = sitb::encode(features, labels).map_err(|source| Error::Format {
        path: path.to_path_buf(),
        source,
    })?;
    fsio::write_atomic(path, &bytes)
}

/// Reads and validates a feature file. Model and dataset ids are left empty.
pub fn read_features(path: &Path) -> Result<(FeatureMatrix, LabelVector)> {
    let bytes = fsio::read(path)?;
    sitb::decode(&bytes).map_err(|source| Error::Format {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_size() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/a.sitb");
        let f =
            FeatureMatrix::new("m", "d", 6, 2, (0..12).map(|i| i as f32 * 0.25).collect()).unwrap();
        let y = LabelVector::new("d", vec![0, 1, 2, 0, 1, 2]).unwrap();
        write_features(&f, &y, &path).unwrap();
        assert_eq!(
            std::fs::metadata(&path).unwrap().len(),
            (24 + 6 * 2 * 4 + 8 + 6 * 4) as u64
        );
        let (g, z) = read_features(&path).unwrap();
        assert_eq!(g.values(), f.values());
        assert_eq!(z.labels(), y.labels());
        assert!(g.model_id.is_empty() && z.dataset_id.is_empty());
    }

    #[test]
    fn missing_file_is_io_error() {
        let e = read_features(Path::new("/nonexistent/x.sitb")).unwrap_err();
        assert_eq!(e.code(), "missing_file");
    }
}
