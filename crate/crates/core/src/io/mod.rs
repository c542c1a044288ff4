//! Files in and out: CSV datasets, model documents, result tables and run
//! manifests, plus the real-data experiment driver.

mod csv_data;
mod manifest;
mod model_file;
mod realdata;
mod results;

pub use csv_data::{load_csv, load_feature_rows, write_csv, CsvSchema, TargetColumn};
pub use manifest::RunManifest;
pub use model_file::{load_model, model_from_json, model_to_json, save_model, MODEL_FORMAT, MODEL_VERSION};
pub use realdata::{realdata_experiment, realdata_experiment_presplit, RealDataConfig, RealDataReport, RealDataRow};
pub use results::{emit_results, read_table, Cell, OutputFormat, ResultTable};
