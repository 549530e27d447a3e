use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A length was not a power of two, too short, or did not match its partner.
    #[error("size error: {0}")]
    Size(String),

    /// A value outside the domain of the operation (zero signal, out-of-range offset, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("config error: {0}")]
    Config(String),

    /// More alternatives were requested than the deterministic generator can supply.
    #[error("capacity error: requested U = {requested} alternatives but at most {max} are available for N = {n}")]
    Capacity { n: usize, requested: usize, max: usize },

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub(crate) fn check_fft_size(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Size(format!("length {n} is not a power of two")));
    }
    Ok(())
}

/// FFT sizes usable by the SLM machinery: powers of two with N/4 >= 2.
pub(crate) fn check_slm_size(n: usize) -> Result<()> {
    check_fft_size(n)?;
    if n < 8 {
        return Err(Error::Size(format!("N = {n} is below the minimum of 8")));
    }
    Ok(())
}
