//! File formats: PNG images, PFM depth maps, key-value settings and the
//! binary cost-volume container.

mod keyvalue;
mod pfm;
mod png;
mod volume;

pub use self::keyvalue::{join_list, KeyValues, SettingsFile};
pub use self::pfm::{decode_pfm, encode_pfm, read_pfm, write_pfm};
pub use self::png::{read_png, write_depth_png16, write_gray8, write_png, PngDepth, DEPTH_PNG_UNITS_PER_M, DISPLAY_GAMMA};
pub use self::volume::{decode_cost_volume, encode_cost_volume, load_cost_volume, save_cost_volume, HEADER_LEN, MAGIC, VERSION};
