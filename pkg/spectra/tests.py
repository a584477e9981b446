import json
import math
from io import StringIO

import numpy as np
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.test import SimpleTestCase
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APITestCase
from scipy import special

from .bessel import bessel_j0, bessel_j0_first_zero, bessel_j1
from .bounds import bound_f, brownian_small_ball, chung_bounds, lambda1, levy_area_rate, x_star

J01 = 2.404825557695773


class BesselTests(SimpleTestCase):
    def test_series_values(self):
        self.assertEqual(bessel_j0(0.0), 1.0)
        self.assertEqual(bessel_j1(0.0), 0.0)
        self.assertAlmostEqual(bessel_j0(2.0), 0.22389077914123567, places=14)
        self.assertAlmostEqual(bessel_j0(3.0), -0.26005195490193345, places=14)
        self.assertAlmostEqual(bessel_j1(1.0), 0.44005058574493355, places=14)

    def test_series_matches_scipy(self):
        for x in np.linspace(-8.0, 8.0, 161):
            self.assertAlmostEqual(bessel_j0(float(x)), float(special.j0(x)), delta=1e-12)
            self.assertAlmostEqual(bessel_j1(float(x)), float(special.j1(x)), delta=1e-12)

    def test_first_zero(self):
        self.assertAlmostEqual(bessel_j0_first_zero(), float(special.jn_zeros(0, 1)[0]), delta=1e-10)
        zero = bessel_j0_first_zero()
        self.assertAlmostEqual(zero, J01, delta=1e-8)
        self.assertLessEqual(abs(bessel_j0(zero)), 1e-8)

    def test_out_of_range_rejected(self):
        with self.assertRaises(ValidationError):
            bessel_j0(9.0)
        with self.assertRaises(ValidationError):
            bessel_j1(math.nan)


class EigenvalueTests(SimpleTestCase):
    def test_lambda1(self):
        self.assertAlmostEqual(lambda1(1), 1.2337006, delta=1e-7)
        self.assertAlmostEqual(lambda1(2), 2.8915930, places=6)
        self.assertLess(lambda1(1), lambda1(2))

    def test_unsupported_dimension_rejected(self):
        for n in (0, 3):
            with self.assertRaises(ValidationError):
                lambda1(n)


class BoundFunctionTests(SimpleTestCase):
    def setUp(self):
        self.l1, self.l2 = lambda1(1), lambda1(2)

    def test_bound_f_values(self):
        self.assertAlmostEqual(bound_f(0.5, self.l1, self.l2), 4.525509, delta=1e-6)
        self.assertGreater(bound_f(1e-9, self.l1, self.l2), 1e7)

    def test_bound_f_domain(self):
        for x in (0.0, 1.0, -0.5, 2.0, math.nan):
            with self.assertRaises(ValidationError):
                bound_f(x, self.l1, self.l2)
        with self.assertRaises(ValidationError):
            bound_f(0.5, -1.0, self.l2)

    def test_x_star_values(self):
        self.assertAlmostEqual(x_star(self.l1, self.l2), 0.341356, delta=1e-6)
        self.assertAlmostEqual(x_star(2.0, 2.0), (math.sqrt(33) - 3) / 6, places=14)
        self.assertAlmostEqual(x_star(2.0, 2.0), 0.457427, places=6)

    def test_x_star_is_a_critical_point_and_global_minimum(self):
        x = x_star(self.l1, self.l2)
        h = 1e-5
        derivative = (bound_f(x + h, self.l1, self.l2) - bound_f(x - h, self.l1, self.l2)) / (2 * h)
        self.assertLessEqual(abs(derivative), 1e-6)
        minimum = bound_f(x, self.l1, self.l2)
        for i in range(1000):
            grid_x = (i + 0.5) / 1000
            self.assertLessEqual(minimum, bound_f(grid_x, self.l1, self.l2) + 1e-12)

    def test_scaling(self):
        x = x_star(self.l1, self.l2)
        for t in (0.5, 2.0, 10.0):
            self.assertAlmostEqual(x_star(t * self.l1, t * self.l2) / x, 1.0, delta=1e-12)
            self.assertAlmostEqual(
                bound_f(0.3, t * self.l1, t * self.l2) / (t * bound_f(0.3, self.l1, self.l2)),
                1.0,
                delta=1e-12,
            )

    def test_degenerate_denominator_rejected(self):
        with self.assertRaises(ValidationError):
            x_star(4.0, 1.0)


class ChungBoundsTests(SimpleTestCase):
    def test_values_and_ordering(self):
        bounds = chung_bounds()
        self.assertAlmostEqual(bounds.c_lower, 1.700468, delta=1e-6)
        self.assertAlmostEqual(bounds.c_upper, 2.072738, delta=1e-5)
        self.assertEqual(bounds.c_upper, math.sqrt(bounds.f_at_xstar))
        self.assertAlmostEqual(bounds.f_at_xstar, 4.296242, delta=5e-5)
        self.assertLess(bounds.lambda1_1, bounds.lambda1_2)
        self.assertLess(bounds.c_lower, bounds.c_upper)
        self.assertLessEqual(bounds.lambda1_2, bounds.f_at_xstar)
        self.assertEqual(bounds.f_at_xstar, bound_f(bounds.x_star, bounds.lambda1_1, bounds.lambda1_2))

    def test_brownian_small_ball(self):
        leading = 4 / math.pi * math.exp(-(math.pi**2) / 2)
        self.assertAlmostEqual(brownian_small_ball(0.5), leading, delta=1e-12)
        self.assertAlmostEqual(brownian_small_ball(0.5), 0.009157, delta=1e-6)
        self.assertAlmostEqual(brownian_small_ball(10.0), 1.0, delta=1e-9)
        self.assertLessEqual(brownian_small_ball(10.0), 1.0)
        with self.assertRaises(ValidationError):
            brownian_small_ball(0.0)

    def test_levy_area_rate(self):
        self.assertEqual(levy_area_rate(), math.pi / 4)


class BoundsCommandTests(SimpleTestCase):
    def test_bounds_json(self):
        out = StringIO()
        call_command("bounds", stdout=out)
        data = json.loads(out.getvalue())
        self.assertEqual(
            list(data), ["lambda1_1", "lambda1_2", "x_star", "f_at_xstar", "c_lower", "c_upper"]
        )
        self.assertAlmostEqual(data["c_lower"], 1.700468, delta=1e-6)
        self.assertAlmostEqual(data["c_upper"], 2.072738, delta=1e-5)


class SpectraApiTests(APITestCase):
    def test_bounds_endpoint(self):
        response = self.client.get(reverse("spectra-bounds"))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertAlmostEqual(response.data["c_lower"], chung_bounds().c_lower)
        again = self.client.get(reverse("spectra-bounds"))
        self.assertEqual(again.data, response.data)

    def test_bound_f_endpoint(self):
        response = self.client.get(reverse("spectra-bound-f"), {"x": 0.5})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertAlmostEqual(response.data["value"], bound_f(0.5, lambda1(1), lambda1(2)))
        self.assertEqual(response.data["x"], 0.5)

    def test_bound_f_with_explicit_eigenvalues(self):
        response = self.client.get(reverse("spectra-bound-f"), {"x": 0.25, "l1": 1.0, "l2": 2.0})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertAlmostEqual(response.data["value"], bound_f(0.25, 1.0, 2.0))

    def test_bound_f_rejects_bad_input(self):
        for query in ({"x": 2.0}, {}, {"x": 0.5, "l1": -1.0}, {"x": "abc"}):
            response = self.client.get(reverse("spectra-bound-f"), query)
            self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST, query)

    def test_x_star_endpoint(self):
        response = self.client.get(reverse("spectra-x-star"))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertAlmostEqual(response.data["value"], chung_bounds().x_star)
        self.assertNotIn("x", response.data)
        degenerate = self.client.get(reverse("spectra-x-star"), {"l1": 4.0, "l2": 1.0})
        self.assertEqual(degenerate.status_code, status.HTTP_400_BAD_REQUEST)
