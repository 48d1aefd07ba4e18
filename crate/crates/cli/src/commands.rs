mod verify;

pub use verify::verify;

use ckn_core::closed_forms::{constants_table, ConstantsQuery};
use ckn_core::param_space::{fmt_g, region_map as classify_grid, write_region_csv, AxisRange};
use serde_json::json;

use crate::args::{ConstantsArgs, Format, RegionArgs};
use crate::output::{sink, write_json, SCHEMA};
use crate::CliError;

pub fn constants(args: &ConstantsArgs) -> Result<(), CliError> {
    let point = args.point.resolve()?;
    if point.is_none() && args.gamma.is_none() {
        return Err(CliError::Usage(
            "give a parameter point ((--N, --a, --b) or (--N, --p, --Lambda)) and/or --gamma".into(),
        ));
    }
    let query = ConstantsQuery {
        point: point.map(|pt| (pt.n, pt.p, pt.lambda)),
        theta: point.map(|pt| pt.theta),
        gamma: args.gamma,
        euclidean: point.and_then(|pt| pt.euclidean),
    };
    let rows = constants_table(&query)?;
    let path = args.out.output.as_deref();
    match args.format {
        Format::Json => write_json(json!({ "schema": SCHEMA, "command": "constants", "rows": rows }), path)?,
        Format::Csv => {
            let opt = |x: Option<f64>| x.map(fmt_g).unwrap_or_default();
            let mut w = csv::Writer::from_writer(sink(path)?);
            w.write_record(["name", "p", "Lambda", "theta", "N", "value", "provenance"])
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            for r in &rows {
                w.write_record([
                    r.name.clone(),
                    opt(r.p),
                    opt(r.lambda),
                    opt(r.theta),
                    r.n.map(|n| n.to_string()).unwrap_or_default(),
                    fmt_g(r.value),
                    r.provenance.tag().to_string(),
                ])
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn region_map(args: &RegionArgs) -> Result<(), CliError> {
    let records = classify_grid(
        args.n,
        AxisRange::new(args.a_min, args.a_max, args.a_points),
        AxisRange::new(args.b_min, args.b_max, args.b_points),
    )?;
    let path = args.out.output.as_deref();
    match args.format {
        Format::Csv => write_region_csv(&records, sink(path)?)?,
        Format::Json => write_json(
            json!({ "schema": SCHEMA, "command": "region-map", "N": args.n, "records": records }),
            path,
        )?,
    }
    Ok(())
}
