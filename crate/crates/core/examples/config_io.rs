//! Read a loss file and a scenario document, convert an exceedance
//! statement, and emit a column file that parses back unchanged.

use opcombine::io::{parse_band, read_losses, write_band, ScenarioConfig};

const LOSSES: &str = "date,cell,gross_loss,recovery
2003-02-11,retail,14000,
2003-09-30,retail,52000,2000
2004-05-06,retail,9000,
2005-01-17,fraud,230000,
2005-08-22,retail,31000,
2005-13-01,retail,10000,
";

const SCENARIO: &str = r#"
[[exceedance]]
amount = 1e6
every_years = 25
interpretation = "mean_recurrence"

[dirichlet]
concentration = 5
knots = [0, 1e4, 1e5, 1e6]
values = [0, 0.5, 0.95, 1]
interpolation = "linear"
"#;

fn main() -> opcombine::Result<()> {
    let data = read_losses(LOSSES.as_bytes(), 10_000.0)?;
    println!("{} records, {} below threshold", data.records.len(), data.truncation.excluded);
    for e in &data.row_errors {
        println!("line {}: {}", e.line, e.message);
    }
    for cell in data.cells() {
        println!("{cell}: annual counts {:?}", data.annual_counts(cell).map(|c| c.counts));
    }

    let cfg = ScenarioConfig::from_toml(SCENARIO)?;
    let s = &cfg.exceedance[0];
    println!("exceedance rate {:.3}/yr; with 4 events a year F(1e6) = {:.4}", s.rate(), s.severity_level(4.0)?);

    let prior = cfg.dirichlet.as_ref().expect("section present").to_prior()?;
    let post = opcombine::dirichlet::dp_posterior(&prior, &data.losses("retail"))?;
    let band = opcombine::dirichlet::dp_band_curve(&post, &[2e4, 5e4, 1e5], 0.1, 0.9)?;
    let text = write_band(&band);
    print!("{text}");
    assert_eq!(parse_band(&text)?, band);
    Ok(())
}
