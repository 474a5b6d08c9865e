"""Run the seeded campaigns and print the JSON report."""

from multicurves import CampaignConfig, run_all

report = run_all(CampaignConfig(seed=42, budget=10))
print(report.dumps())
print("all families pass:", report.ok)
