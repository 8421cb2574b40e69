from .schema import (
    CharSumReport,
    CheckRecord,
    Counterexample,
    EcCertificate,
    ExactEigenvalue,
    FamilyTrendReport,
    GraphParams,
    MixingSample,
    MixingScanReport,
    QuasiRandomStats,
    QuasiRandomTrend,
    RunConfig,
    RunReport,
    SpectrumReport,
    TrendRow,
    WeilCheck,
)

__all__ = [
    "CharSumReport",
    "CheckRecord",
    "Counterexample",
    "EcCertificate",
    "ExactEigenvalue",
    "FamilyTrendReport",
    "GraphParams",
    "MixingSample",
    "MixingScanReport",
    "QuasiRandomStats",
    "QuasiRandomTrend",
    "RunConfig",
    "RunReport",
    "SpectrumReport",
    "TrendRow",
    "WeilCheck",
]
