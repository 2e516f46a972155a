"""Sample statistics over plain lists."""
import math


def sample_mean(sample_values):
    return sum(sample_values) / len(sample_values)


def sample_variance(sample_values):
    mean_value = sample_mean(sample_values)
    squared_deviations = [(value - mean_value) ** 2 for value in sample_values]
    return sum(squared_deviations) / (len(sample_values) - 1)


def sample_stddev(sample_values):
    return math.sqrt(sample_variance(sample_values))
