//! Run the built-in dense-oracle scenarios and print their reports.

use circcs::diagnostics::scenarios::{Scenario, REPORT_HEADER};

fn main() -> circcs::Result<()> {
    println!("{REPORT_HEADER}");
    for sc in Scenario::ALL {
        let report = sc.run(sc.default_trials().min(10))?;
        println!("{report}");
    }
    Ok(())
}
