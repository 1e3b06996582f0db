//! Electric field gradient tensors and everything derived from them.

mod mesh;
mod response;
mod table;
mod tensor;

pub use mesh::{surface_mesh, MeshRow};
pub use response::{ner_drive_series, FieldCoupling, LinearResponseModel, StrainCoupling};
pub use table::{EfgTable, TableRow, TABLE_COLUMNS};
pub use tensor::{
    asymmetry, efg_to_atomic, efg_to_si, nqi_from_efg, EfgTensor, EfgUnit, NucleusRecord,
};

pub use crate::tensor::{rotate_about_x, Frame};
