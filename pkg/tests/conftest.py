from hypothesis import HealthCheck, settings

# derandomized so that two runs of the suite produce the same reports
settings.register_profile(
    "homolog",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("homolog")
