//! Ledger of printed formulas that disagree with what the pipeline derives.
//!
//! Each entry names the printed form, the derived replacement and the test or
//! closed-form check that pins the derived value.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TypoEntry {
    pub id: &'static str,
    pub location: &'static str,
    pub printed: &'static str,
    pub derived: &'static str,
    pub verified_by: &'static str,
}

const fn entry(
    id: &'static str,
    location: &'static str,
    printed: &'static str,
    derived: &'static str,
    verified_by: &'static str,
) -> TypoEntry {
    TypoEntry {
        id,
        location,
        printed,
        derived,
        verified_by,
    }
}

static LEDGER: &[TypoEntry] = &[
    entry(
        "d-hat-divisor",
        "log of a power series, analytic view",
        "D-hat_r = -sum_i B-hat_ri (-lambda)^i / i!",
        "D-hat_r = -sum_i B-hat_ri (-lambda)^i / i",
        "series::tests::exp_of_log_round_trip",
    ),
    entry(
        "d-r-factorial",
        "log of a power series, exponential view",
        "D_r divides by (i-1)!",
        "D_r multiplies by (i-1)!",
        "series::tests::exponential_log_multiplies_by_factorial",
    ),
    entry(
        "exponential-inversion-factorial",
        "series inversion, exponential view",
        "(u/v)^k = sum y*_i v^(ia)/(ia)!",
        "(u/v)^k = sum y*_i v^(ia)/i!, so y*_i = i! x*_i",
        "inversion::tests::exponential_variant_rescales",
    ),
    entry(
        "inversion-leading-power",
        "series inversion, first expression for x*_i",
        "x*_i = k n^-1 C-hat_i(-n, 1/x0, x)",
        "x*_i = k n^-1 x0^-n C-hat_i(-n, 1/x0, x)",
        "inversion::tests::k_consistency",
    ),
    entry(
        "thetabar-definition",
        "notation, cumulative power vector",
        "thetabar_i = sum_{j=1}^k theta_j",
        "thetabar_i = sum_{j=i}^k theta_j",
        "oracle::tests::quad_joint_pareto_matches_beta_moment",
    ),
    entry(
        "beta-lemma-thetabar",
        "n-free factor B(s : thetabar), trailing product",
        "b(s_{i-1} - s_i, s_i + 1 : thetabar_1)",
        "b(s_{i-1} - s_i, s_i + 1 : thetabar_i)",
        "beta::tests::factorization",
    ),
    entry(
        "product-lemma-thetabar",
        "joint moment of uniform spacings, theorem statement",
        "finite if Re thetabar < (s + 1) alpha with s_i = u - r_i",
        "finite if Re thetabar_i < (s_i + 1) alpha with s_i = n - r_i",
        "oracle::tests::moment_existence_rule",
    ),
    entry(
        "leading-exponent",
        "leading terms of the moment expansion",
        "n^(psi_1) sum ...",
        "n^(psibar_1) sum ...",
        "moments::tests::pareto_mean_is_exact",
    ),
    entry(
        "power-series-variable",
        "corollary introducing the joint moments",
        "power series in (1/n, n^-alpha)",
        "power series in (1/n, n^-a)",
        "moments::tests::frechet_mean_first_order",
    ),
    entry(
        "quantile-c3",
        "quantile power coefficient C_3psi",
        "psi c0^(psi-3a-3) [c0^2 c2 + (psi-3a-1) c0 c1 c2 + (psi+1)_2/6 (psi+3a/2)(a+1) c1^3]",
        "psi c0^(psi-3a-3) [c0^2 c3 + (psi-3a-1) c0 c1 c2 + (psi-3a-1)(psi-3a-2)/6 c1^3]",
        "closed_forms: quantile coefficient C_3psi as derived",
    ),
    entry(
        "inversion-x1-sign",
        "inversion coefficient x*_1 in the quantile proof",
        "c0^(-a-2) c1",
        "-c0^(-a-2) c1",
        "closed_forms: inversion coefficient x1* as printed",
    ),
    entry(
        "inversion-x3-degree",
        "inversion coefficient x*_3 in the quantile proof",
        "... - (2+3a)(1+a) c1^2/2",
        "... - (2+3a)(1+a) c1^3/2",
        "closed_forms: inversion coefficient x3* as printed",
    ),
    entry(
        "leading-n-a-term",
        "leading terms of the moment expansion",
        "n^-a C_0(s : psi)",
        "n^-a C_1(s : psi)",
        "closed_forms: leading display: n^-a term as printed",
    ),
    entry(
        "c0-power",
        "leading coefficient C_0(s : psi)",
        "c0 B(s : -psibar)",
        "c0^(psibar_1) B(s : -psibar)",
        "closed_forms: leading display: C_0(s:psi) = c0^psibar_1 B(s:-psibar)",
    ),
    entry(
        "c1-power",
        "leading coefficient C_1(s : psi)",
        "c0^(psibar_1 - a - 2) c1 sum_j psi_j B(s : a I_j - psibar)",
        "c0^(psibar_1 - a - 1) c1 sum_j psi_j B(s : a I_j - psibar)",
        "closed_forms: leading display: C_1(s:psi) with c0^(psibar_1-a-1)",
    ),
    entry(
        "pair-c0-lambda-one",
        "pair coefficient C_0(s : lambda 1) at lambda = 1",
        "c0^2 (s1 - 1)^-1 s2",
        "c0^2 (s1 - 1)^-1 s2^-1",
        "closed_forms: pair: C_0(s:lambda 1) general form",
    ),
    entry(
        "pair-c0-lambda-two",
        "pair coefficient C_0(s : lambda 1) at lambda = 2",
        "c0^2 <s2 - 2>_2^-1 <s2>_2^-1",
        "c0^4 <s1 - 2>_2^-1 <s2>_2^-1",
        "closed_forms: pair: C_0(s:lambda 1) general form",
    ),
    entry(
        "f2-placement",
        "covariance of two normalised order statistics",
        "F_0 + F_1/n + E_c F_2/n",
        "F_0 + F_1/n + E_c F_2 n^-a",
        "oracle::tests::cauchy_covariance_places_f2_at_n_minus_a",
    ),
    entry(
        "unit-alpha-ec",
        "unit tail index example, definition of E_c",
        "E_c = c0^(-a-1) c0",
        "E_c = c0^(-a-1) c1",
        "closed_forms: unit alpha: E_c as printed",
    ),
    entry(
        "b-k0-index",
        "product moment factor B_k0",
        "prod_{i=1}^k 1/(s_1 - k + 1)",
        "prod_{i=1}^k 1/(s_i - k + i)",
        "closed_forms: B_k0 = prod (s_i - k + i)^-1",
    ),
    entry(
        "b-10-example",
        "product moment factor examples",
        "B_10 = s_1",
        "B_10 = s_1^-1",
        "closed_forms: B_10 example as printed",
    ),
    entry(
        "product-leading-sign",
        "product moment of k normalised order statistics",
        "{1 + n^-1 <k>_2/2} B_k0",
        "{1 - n^-1 <k>_2/2} B_k0",
        "closed_forms: product moment: n^-1 term as printed",
    ),
    entry(
        "kappa0-times-d",
        "leading joint third cumulant",
        "2 (s1 + s2 - 2) D(s1 s2 s3)",
        "2 (s1 + s2 - 2) / D(s1 s2 s3)",
        "closed_forms: third cumulant: kappa_0 = 2(s1 + s2 - 2)/D",
    ),
    entry(
        "kappa1-numerator",
        "n^-1 term of the joint third cumulant, and its a = 1 summary",
        "2 {s2 (1 - 2 s1) + s1 - s1^2} / D",
        "2 {s2 (1 - 2 s1) + 2 s1 - s1^2} / D, so kappa_1(3,2,1) = -13/6",
        "closed_forms: third cumulant: kappa_1 as printed; acceptance criterion 7 (left failing)",
    ),
    entry(
        "b-1-dot",
        "sums B_k. for small k",
        "B_1. = B_11 - 1",
        "B_1. = B_11 = <s1>_(1-a)^-1",
        "closed_forms: B_1. as printed",
    ),
    entry(
        "b-2j-line",
        "sums B_k. for small k, k = 2 entries",
        "B_22 = 1/s2, B_22 = 1/s2, B_22 = s1",
        "B_21 = 1/s2, B_22 = 1/s1",
        "closed_forms: B_21 = 1/s2 and B_22 = 1/s1",
    ),
    entry(
        "b-4-dot",
        "sums B_k. for small k, closed form of B_4.",
        "{s. s3 (s2 - 2) + s3 (s2 - 4 s2 + 4) - s2 s4} {(s1 - 2) <s2 - 2>_2 <s3>_2 s4}^-1",
        "sum of the printed B_41..B_44, which are correct",
        "closed_forms: B_41, B_42, B_43, B_44",
    ),
    entry(
        "covariance-leading-factor",
        "unit tail index covariance with a = 1",
        "<s1>_2^-1 s2^-1 (s - n^-1 s1)",
        "<s1>_2^-1 s2^-1 (1 - n^-1 s1)",
        "closed_forms: unit alpha, a = 1: covariance <s1>_2^-1 s2^-1 (1 - n^-1 s1)",
    ),
    entry(
        "pair-d2-extra-terms",
        "n^-2 coefficient of the pair moment, alpha = beta = 1",
        "d_2(s : 1) = C_2(s : 1) - D_2s H_c + c0^-2 c1^2",
        "d_2(s : 1) = C_2(s : 1), since e_2(-2) = e_1(-1) = 0",
        "closed_forms: a = 1: d_2(s:1) = C_2(s:1) for pairs",
    ),
    entry(
        "f3s-definition",
        "n^-2 covariance coefficient, the constant F_3s in all three worked cases",
        "F_3s = (s2 + 1)/<s1>_2 + 1/s2",
        "F_3s = (s2 + 1)/<s1 + 1>_2 + 1/s2",
        "closed_forms: covariance n^-2 term with F_3s = (s2+1)/<s1+1>_2 + 1/s2",
    ),
    entry(
        "b-kj-factorial",
        "product moment factor B_kj, j < k",
        "<s_j - k + j + 1>_(a-1) (falling)",
        "(s_j - k + j + 1)_(a-1) (rising); the two agree only for a = 1, 2",
        "closed_forms: B_kj with (s_j - k + j + 1)_(a-1), j < k",
    ),
    entry(
        "cauchy-c2-divisor",
        "Cauchy quantile coefficient C_2psi",
        "psi pi^(4-psi) {1/5 + (psi - 5)/a}",
        "psi pi^(4-psi) {1/5 + (psi - 5)/18}",
        "closed_forms: Cauchy: C_2psi = psi pi^(4-psi) {1/5 + (psi-5)/18}",
    ),
    entry(
        "cauchy-c3",
        "Cauchy quantile coefficient C_3psi",
        "-psi pi^(6-psi) {1/105 - 2 psi/15 + (psi+1)_2/162}",
        "-psi pi^(6-psi) {1/7 + (psi - 7)/15 + (psi - 7)(psi - 8)/162}",
        "closed_forms: Cauchy: C_i1 = (-4)^i B_2i/(2i)!",
    ),
    entry(
        "cauchy-mean-third",
        "Cauchy normalised mean",
        "s^-1 - n^-2 pi^2 (s + 1)",
        "s^-1 - n^-2 pi^2 (s + 1)/3",
        "closed_forms: Cauchy: normalised mean n^-2 term -pi^2 (s+1)/3",
    ),
    entry(
        "student-gn",
        "Student t tail coefficient c3",
        "-(gamma)_3 N^(gamma+3) G_N (N+6)^-1/6",
        "-(gamma)_3 N^(gamma+3) g_N (N+6)^-1/6",
        "catalog::tests::tail_coefficients",
    ),
    entry(
        "f-dist",
        "F distribution tail",
        "density x^(M/2), d_i with nu^i, alpha = N/2 - 1",
        "density x^(M/2-1), d_i with nu^-i, alpha = N/2, c_i = d_i/(N/2 + i)",
        "catalog::tests::tail_series_matches_truth",
    ),
    entry(
        "stable-alpha",
        "one-sided stable law tail coefficients",
        "c_i with gamma^-1 and gamma = alpha",
        "c_i = a_(i+1)/(alpha (i+1)) with gamma = -alpha",
        "catalog::tests::stable_half_is_levy",
    ),
    entry(
        "equation-numbering",
        "equation labels in the first worked example",
        "labels skip from the pair moment to the covariance without the intermediate label",
        "editorial only, no formula affected",
        "none",
    ),
];

pub fn ledger() -> &'static [TypoEntry] {
    LEDGER
}

pub fn find(id: &str) -> Option<&'static TypoEntry> {
    LEDGER.iter().find(|e| e.id == id)
}
