"""Piecewise-linear interpolation over sorted knots."""


def linear_interpolate(knot_positions, knot_values, query_position):
    if query_position <= knot_positions[0]:
        return knot_values[0]
    if query_position >= knot_positions[-1]:
        return knot_values[-1]
    for segment_index in range(1, len(knot_positions)):
        if query_position <= knot_positions[segment_index]:
            left_position = knot_positions[segment_index - 1]
            right_position = knot_positions[segment_index]
            blend_factor = (query_position - left_position) / (right_position - left_position)
            left_value = knot_values[segment_index - 1]
            right_value = knot_values[segment_index]
            return left_value + blend_factor * (right_value - left_value)
    return knot_values[-1]
