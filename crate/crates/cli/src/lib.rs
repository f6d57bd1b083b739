//! Command-line front end: request parsing, the report pipeline and SVG
//! cross-sections.

pub mod error;
pub mod json;
pub mod report;
pub mod request;
pub mod svg;

pub use error::{CliError, CliResult};
pub use report::{fan_for_drawing, run_report, verify_report, Report, Verified};
pub use request::{parse_cone, parse_fan, parse_request, parse_weight, AnalysisRequest, Command, ConeSpec, FanSpec, Options};
pub use svg::{render_svg, write_svg};
