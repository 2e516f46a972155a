"""Gaussian elimination with partial pivoting."""


def solve_linear_system(coefficient_matrix, right_hand_side):
    dimension = len(coefficient_matrix)
    augmented_matrix = [
        list(matrix_row) + [rhs_value]
        for matrix_row, rhs_value in zip(coefficient_matrix, right_hand_side)
    ]
    for pivot_index in range(dimension):
        pivot_row = max(
            range(pivot_index, dimension),
            key=lambda row_index: abs(augmented_matrix[row_index][pivot_index]),
        )
        augmented_matrix[pivot_index], augmented_matrix[pivot_row] = (
            augmented_matrix[pivot_row],
            augmented_matrix[pivot_index],
        )
        pivot_value = augmented_matrix[pivot_index][pivot_index]
        for row_index in range(pivot_index + 1, dimension):
            scale_factor = augmented_matrix[row_index][pivot_index] / pivot_value
            for column_index in range(pivot_index, dimension + 1):
                augmented_matrix[row_index][column_index] -= (
                    scale_factor * augmented_matrix[pivot_index][column_index]
                )
    solution_vector = [0.0] * dimension
    for row_index in reversed(range(dimension)):
        accumulated = augmented_matrix[row_index][dimension]
        for column_index in range(row_index + 1, dimension):
            accumulated -= augmented_matrix[row_index][column_index] * solution_vector[column_index]
        solution_vector[row_index] = accumulated / augmented_matrix[row_index][row_index]
    return solution_vector
