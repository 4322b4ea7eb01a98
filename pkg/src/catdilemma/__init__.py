"""Cat's Dilemma: classical, prequantized and quantized strategy spaces,
their optimal-frequency maps onto the pair-frequency triangle, an exact
feasibility oracle, and coverage analysis."""

from catdilemma.model import (
    NOT_OPTIMAL,
    ChoiceFunctionTable,
    ClassFilter,
    ClassicalStrategy,
    ConditionalTriple,
    FrequencyTriple,
    MappedPoint,
    Model,
    NotOptimal,
    OccupancyTriple,
    PrequantStrategy,
    QuantumStrategy,
    TransitivityClass,
    choice_table,
    classical_conditionals,
    classical_embed,
    classify,
    determinant_d,
    map_strategy,
    occupancy,
    optimal_frequencies,
    prequant_conditionals,
    product_preimage,
    quant_conditionals,
    z_to_sphere,
)

__version__ = "0.1.0"
