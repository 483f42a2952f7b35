"""
Source package for the neural exchange-rate forecasting toolkit.
"""
