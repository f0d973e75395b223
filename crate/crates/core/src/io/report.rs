use std::path::Path;

use super::{read_json, write_json};
use crate::error::Result;
use crate::verify::VerificationReport;

pub fn write_report(report: &VerificationReport, path: &Path) -> Result<()> {
    write_json(path, report)
}

pub fn read_report(path: &Path) -> Result<VerificationReport> {
    read_json(path)
}
