//! JSON calibration records: two intrinsics plus the relative pose.
//!
//! ```json
//! {
//!   "source_id": "kitti/2011_09_26/cam2-cam3",
//!   "k1": { "fx": 721.5, "fy": 721.5, "cx": 609.6, "cy": 172.9, "skew": 0.0 },
//!   "k2": { "fx": 721.5, "fy": 721.5, "cx": 609.6, "cy": 172.9, "skew": 0.0 },
//!   "rotation": [1, 0, 0, 0, 1, 0, 0, 0, 1],
//!   "translation": [-0.54, 0, 0]
//! }
//! ```
//!
//! `rotation` is row-major and maps camera-1 coordinates into camera 2
//! (`x2 = R x1 + t`). `skew` may be omitted.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::EpiError;
use crate::geometry::{
    rotation_deviation, row_major, CameraIntrinsics, FundamentalMatrix, Mat3, RelativePose, Vec3,
};
use crate::synthetic::CameraRig;

/// Orthonormality tolerance applied to imported rotations.
pub const IMPORT_ROTATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalibError {
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("{path}: {msg}")]
    Invalid { path: &'static str, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibRecord {
    pub rig: CameraRig,
    pub source_id: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CalibFile {
    source_id: String,
    k1: CameraIntrinsics,
    k2: CameraIntrinsics,
    rotation: [f64; 9],
    translation: [f64; 3],
}

impl CalibRecord {
    pub fn fundamental(&self) -> Result<FundamentalMatrix, EpiError> {
        self.rig.fundamental()
    }
}

/// Nearest rotation via SVD (`U V^T`).
fn orthonormalize(r: &Mat3) -> Mat3 {
    let svd = r.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    u * v_t
}

pub fn import_calib(text: &str) -> Result<CalibRecord, CalibError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: CalibFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CalibError::Schema {
            path: if path == "." { "<root>".into() } else { path },
            msg: e.into_inner().to_string(),
        }
    })?;

    for (path, k) in [("k1", &file.k1), ("k2", &file.k2)] {
        k.validate().map_err(|_| CalibError::Invalid {
            path,
            msg: "fx and fy must be positive and every entry finite".into(),
        })?;
    }
    let mut rotation = Mat3::from_row_slice(&file.rotation);
    let dev = rotation_deviation(&rotation);
    if !(dev <= IMPORT_ROTATION_TOLERANCE) {
        let det = rotation.determinant();
        return Err(CalibError::Invalid {
            path: "rotation",
            msg: format!(
                "not a rotation (orthonormality deviation {dev:e}, determinant {det})"
            ),
        });
    }
    let pose = match RelativePose::new(rotation, Vec3::from(file.translation)) {
        Ok(p) => p,
        Err(_) => {
            rotation = orthonormalize(&rotation);
            RelativePose {
                rotation,
                translation: Vec3::from(file.translation),
            }
        }
    };
    if !(pose.translation.norm() > 1e-12) {
        return Err(CalibError::Invalid {
            path: "translation",
            msg: "translation must be nonzero".into(),
        });
    }
    Ok(CalibRecord {
        rig: CameraRig {
            k1: file.k1,
            k2: file.k2,
            pose,
        },
        source_id: file.source_id,
    })
}

pub fn export_calib(record: &CalibRecord) -> String {
    let file = CalibFile {
        source_id: record.source_id.clone(),
        k1: record.rig.k1,
        k2: record.rig.k2,
        rotation: row_major(&record.rig.pose.rotation),
        translation: [
            record.rig.pose.translation.x,
            record.rig.pose.translation.y,
            record.rig.pose.translation.z,
        ],
    };
    let mut s = serde_json::to_string_pretty(&file).expect("plain data serializes");
    s.push('\n');
    s
}
