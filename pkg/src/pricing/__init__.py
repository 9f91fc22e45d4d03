from src.pricing.curves import CurveFamily, CurveSpec, check_publish_curve, check_read_curve
from src.pricing.publishers import OAPublisher, TAPublisher
from src.pricing.fees import (
    FeeDecomposition,
    FeeSlope,
    RegimeThreshold,
    compose_fee,
    fee_derivative,
    is_kink,
    optimal_alpha,
    par_fee,
    threshold,
)
from src.pricing.profit import (
    MarginalProfit,
    StabilizedSchedule,
    marginal_profit,
    naive_marginal_profit,
    profit,
    stabilized_fee_schedule,
)
