import numpy as np

from leafdx.imaging import BinaryMask, hough_lines, line_intersection


class TestHoughLines:
    def test_empty_mask(self):
        assert hough_lines(BinaryMask(np.zeros((20, 20), dtype=bool))) == []

    def test_horizontal_segment_peak(self):
        a = np.zeros((40, 60), dtype=bool)
        a[17, 5:55] = True
        lines = hough_lines(BinaryMask(a), min_votes=30)
        assert lines, "expected a peak"
        top = lines[0]
        assert top.theta == 90.0
        assert top.rho == 17.0
        assert top.score == 50

    def test_vertical_segment_peak(self):
        a = np.zeros((40, 60), dtype=bool)
        a[3:33, 21] = True
        top = hough_lines(BinaryMask(a), min_votes=20)[0]
        assert top.theta == 0.0
        assert top.rho == 21.0
        assert top.score == 30

    def test_two_perpendicular_lines(self):
        a = np.zeros((50, 50), dtype=bool)
        a[10, 5:45] = True
        a[5:45, 30] = True
        lines = hough_lines(BinaryMask(a), min_votes=35)
        assert len(lines) >= 2
        thetas = sorted(l.theta for l in lines[:2])
        assert abs(thetas[1] - thetas[0] - 90.0) < 1e-9

    def test_min_votes_filters(self):
        a = np.zeros((30, 30), dtype=bool)
        a[4, 10:20] = True
        assert hough_lines(BinaryMask(a), min_votes=11) == []
        assert hough_lines(BinaryMask(a), min_votes=10)

    def test_theta_range_restriction(self):
        a = np.zeros((30, 30), dtype=bool)
        a[14, 2:28] = True  # horizontal: theta 90
        assert hough_lines(BinaryMask(a), min_votes=20, theta_range=(80, 100))
        assert hough_lines(BinaryMask(a), min_votes=20, theta_range=(0, 40)) == []

    def test_wrapped_theta_range(self):
        a = np.zeros((30, 30), dtype=bool)
        a[3:27, 9] = True  # vertical: theta 0
        found = hough_lines(BinaryMask(a), min_votes=20, theta_range=(170, 10))
        assert found and found[0].theta == 0.0

    def test_scores_sorted_descending(self):
        a = np.zeros((50, 50), dtype=bool)
        a[10, 5:45] = True
        a[30, 15:35] = True
        lines = hough_lines(BinaryMask(a), min_votes=15)
        scores = [l.score for l in lines]
        assert scores == sorted(scores, reverse=True)

    def test_oblique_line_within_step(self):
        # 45-degree line y = x: rho = x cos(135) + y sin(135) = 0
        n = 40
        a = np.zeros((n, n), dtype=bool)
        for i in range(n):
            a[i, i] = True
        top = hough_lines(BinaryMask(a), min_votes=n - 5)[0]
        assert abs(top.theta - 135.0) <= 1.0
        assert abs(top.rho) <= 1.0


class TestLineIntersection:
    def test_perpendicular_meet(self):
        from leafdx.imaging import LineParam

        horiz = LineParam(rho=10.0, theta=90.0)  # y = 10
        vert = LineParam(rho=4.0, theta=0.0)  # x = 4
        pt = line_intersection(horiz, vert)
        assert np.allclose(pt, (4.0, 10.0))

    def test_parallel_returns_none(self):
        from leafdx.imaging import LineParam

        assert line_intersection(LineParam(1.0, 45.0), LineParam(5.0, 45.0)) is None
