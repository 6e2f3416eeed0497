from .loads import (
    DataError,
    HourlyLoadRecord,
    LoadTable,
    StorageSpec,
    ingest_csv,
    read_capacities_csv,
    split_day,
    write_capacities_csv,
    write_loads_csv,
)
from .report import emit_report
from .simulate import AnnualReport, SimulationConfig, simulate
from .synthetic import generate_synthetic
