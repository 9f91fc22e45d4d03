from src.competition.duopoly import (
    DuopolyScenario,
    Eq9Decomposition,
    ImpliedOAFee,
    Prop3Case,
    Prop3Classification,
    Prop3Sign,
    eq9_decomposition,
    implied_oa_fee,
    proposition3_classify,
    shift_sweep,
)
