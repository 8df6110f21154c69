//! Loss files, TOML configuration and column-file output.

mod config;
mod losses;
mod text;

pub use config::{
    CellSection, CellsConfig, DirichletSection, DsSection, ExceedanceStatement, ExpertsSection, IntervalSection,
    RecurrenceInterpretation, ScenarioConfig, XiKeyword, XiSetting,
};
pub use losses::{ingest_losses, read_losses, LossData, LossRecord, RowError, TruncationSummary};
pub use text::{
    parse_band, parse_ds, parse_histogram, parse_pbox, write_band, write_ds, write_histogram, write_pbox,
    ColumnTable,
};
