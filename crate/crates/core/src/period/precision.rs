/// Fractional bits used to re-verify density certificates unless overridden.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// Reads `BBF_PRECISION_BITS`, falling back to the default on absence or garbage.
pub fn precision_bits_from_env() -> u32 {
    std::env::var("BBF_PRECISION_BITS")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&b| (53..=4096).contains(&b))
        .unwrap_or(DEFAULT_PRECISION_BITS)
}
