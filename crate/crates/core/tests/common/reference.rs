//! Reference values generated by fixtures/oracle.py (mpmath, 40 digits).
#![allow(dead_code)]

pub const LN_GAMMA_HALF: f64 = 0.572_364_942_924_700_1;
pub const REG_LOWER_2_5_AT_1_3: f64 = 0.238_634_732_154_986_1;
pub const REG_UPPER_3_AT_40: f64 = 0.000_000_000_000_003_572_865_928_700_226;
pub const GAMMA_QUANTILE_2_5_AT_0_73: f64 = 3.195_554_673_439_51;
pub const NORMAL_QUANTILE_0_975: f64 = 1.959_963_984_540_054_3;
pub const PCF_M1_AT_0: f64 = 1.253_314_137_315_500_3;
pub const PCF_M2_4_AT_M0_7: f64 = 2.250_961_554_821_251;
pub const GR_CDF_1_5_15_AT_0_4: f64 = 0.559_227_031_913_337;
pub const GR_PDF_1_5_15_AT_0_4: f64 = 3.044_774_630_181_063_6;
pub const GR_QUANTILE_2_3_AT_0_9: f64 = 1.331_955_997_500_694_5;
pub const GR_MEAN_1_5_15: f64 = 0.388_461_664_210_517;
pub const DESIGN_CDF_AT_1: f64 = 0.538_234_963_670_047_6;
pub const DESIGN_CDF_AT_5: f64 = 0.838_962_758_281_566_2;
pub const DESIGN_CDF_AT_20: f64 = 0.999_999_936_924_595;
pub const PDF_0_3_2_1_5_15_AT_0_5: f64 = 1.041_663_510_867_179_7;
pub const HRF_AT_2: f64 = 0.201_204_616_160_144_87;
pub const DESIGN_QUANTILE_0_9: f64 = 6.120_295_284_788_944;
pub const ODDS_B2_AT_1: f64 = 0.665_490_832_619_663_7;
pub const E2_HALF_1: [f64; 7] = [
    0.444_444_444_444_444_4,
    -0.533_333_333_333_333_3,
    0.350_476_190_476_190_5,
    -0.163_668_430_335_097,
    0.060_138_802_995_945_85,
    -0.018_352_018_352_018_353,
    0.004_808_798_882_872_957,
];
pub const EGR2_SECOND_MOMENT: f64 = 1.5;
pub const RAYLEIGH_MGF_0_5: f64 = 1.602_032_725_223_878;
pub const RAYLEIGH_INCOMPLETE_MEAN_AT_MEDIAN: f64 = 0.258_113_121_629_450_77;
