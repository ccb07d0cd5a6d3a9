//! Hourly profile import: CSV with a `hour,load_kwh,gen_kwh` header and one
//! row per hour, hours numbered consecutively from 0.

#[derive(Debug, PartialEq, thiserror::Error)]
pub enum ProfileCsvError {
    #[error("profile CSV is empty; expected a 'hour,load_kwh,gen_kwh' header")]
    Empty,
    #[error("bad header '{0}'; expected 'hour,load_kwh,gen_kwh'")]
    Header(String),
    #[error("line {line}: expected 3 comma-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: cannot parse '{value}' as a number")]
    Number { line: usize, value: String },
    #[error("line {line}: hour {got} out of order, expected {expected}")]
    HourOrder { line: usize, expected: usize, got: usize },
    #[error("profile has a header but no data rows")]
    NoRows,
}

pub fn parse_profile_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>), ProfileCsvError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(ProfileCsvError::Empty)?;
    if header.trim() != "hour,load_kwh,gen_kwh" {
        return Err(ProfileCsvError::Header(header.trim().to_owned()));
    }

    let mut load = Vec::new();
    let mut gen = Vec::new();
    for (index, row) in lines {
        let line = index + 1;
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 3 {
            return Err(ProfileCsvError::FieldCount { line, found: fields.len() });
        }
        let number = |value: &str| {
            value
                .trim()
                .parse::<f64>()
                .map_err(|_| ProfileCsvError::Number { line, value: value.trim().to_owned() })
        };
        let hour: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| ProfileCsvError::Number { line, value: fields[0].trim().to_owned() })?;
        if hour != load.len() {
            return Err(ProfileCsvError::HourOrder { line, expected: load.len(), got: hour });
        }
        load.push(number(fields[1])?);
        gen.push(number(fields[2])?);
    }
    if load.is_empty() {
        return Err(ProfileCsvError::NoRows);
    }
    Ok((load, gen))
}
