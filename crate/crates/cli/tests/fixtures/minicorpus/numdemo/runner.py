"""Exercise the numeric helpers end to end."""
from matrix_ops import matrix_multiply, matrix_transpose
from vector_math import normalize_vector
from statistics_util import sample_mean, sample_stddev


def run_demo():
    square_matrix = [[2.0, 1.0], [1.0, 3.0]]
    transposed = matrix_transpose(square_matrix)
    product = matrix_multiply(square_matrix, transposed)
    unit_vector = normalize_vector([3.0, 4.0])
    flattened_values = [entry for matrix_row in product for entry in matrix_row]
    return sample_mean(flattened_values), sample_stddev(flattened_values), unit_vector


if __name__ == "__main__":
    print(run_demo())
