"""The procurement running example: purchase requisitions, orders, invoices, payments"""

from __future__ import annotations

from datetime import datetime, timezone
from typing import List, Tuple

from .core import LogBuilder
from .models import Log
from .timestamps import ZERO

__all__ = ("running_example",)

STRING = "string"
INTEGER = "integer"

EVENT_TYPES: List[Tuple[str, str]] = [
    ("Create Purchase Requisition", "pr_creator"),
    ("Approve Purchase Requisition", "pr_approver"),
    ("Create Purchase Order", "po_creator"),
    ("Change PO Quantity", "po_editor"),
    ("Insert Invoice", "invoice_inserter"),
    ("Set Payment Block", "invoice_blocker"),
    ("Remove Payment Block", "invoice_block_rem"),
    ("Insert Payment", "payment_inserter"),
]

# (id, type, time, resource)
EVENTS: List[Tuple[str, str, str, str]] = [
    ("e1", "Create Purchase Requisition", "2022-01-09T15:00:00Z", "Mike"),
    ("e2", "Approve Purchase Requisition", "2022-01-09T16:30:00Z", "Tania"),
    ("e3", "Create Purchase Order", "2022-01-10T09:15:00Z", "Mike"),
    ("e4", "Change PO Quantity", "2022-01-13T12:00:00Z", "Mike"),
    ("e5", "Insert Invoice", "2022-01-14T12:00:00Z", "Luke"),
    ("e6", "Insert Invoice", "2022-01-16T11:00:00Z", "Luke"),
    ("e7", "Insert Payment", "2022-01-30T23:00:00Z", "Robot"),
    ("e8", "Insert Payment", "2022-01-31T22:00:00Z", "Robot"),
    ("e9", "Insert Invoice", "2022-02-02T09:00:00Z", "Mario"),
    ("e10", "Create Purchase Order", "2022-02-02T17:00:00Z", "Mario"),
    ("e11", "Set Payment Block", "2022-02-03T07:30:00Z", "Sam"),
    ("e12", "Remove Payment Block", "2022-02-03T23:30:00Z", "Mario"),
    ("e13", "Insert Payment", "2022-02-28T23:00:00Z", "Robot"),
]

E2O: List[Tuple[str, str, str]] = [
    ("e1", "PR1", "Regular placement of PR"),
    ("e2", "PR1", "Regular approval of PR"),
    ("e3", "PR1", "Created order from PR"),
    ("e3", "PO1", "Created order with identifier"),
    ("e4", "PO1", "Change of quantity"),
    ("e5", "PO1", "Invoice created starting from the PO"),
    ("e5", "R1", "Invoice created with identifier"),
    ("e6", "PO1", "Invoice created starting from the PO"),
    ("e6", "R2", "Invoice created with identifier"),
    ("e7", "R1", "Payment for the invoice"),
    ("e7", "P1", "Payment inserted with identifier"),
    ("e8", "R2", "Payment for the invoice"),
    ("e8", "P2", "Payment inserted with identifier"),
    ("e9", "R3", "Invoice created with identifier"),
    ("e10", "R3", "Purchase order created with maverick buying from"),
    ("e10", "PO2", "Purchase order created with identifier"),
    ("e11", "R3", "Payment block due to unethical maverick buying"),
    # Printed truncated ("Payment block removed ..."); the ellipsis is dropped.
    ("e12", "R3", "Payment block removed"),
    ("e13", "R3", "Payment for the invoice"),
    ("e13", "P3", "Payment inserted with identifier"),
]

O2O: List[Tuple[str, str, str]] = [
    ("PR1", "PO1", "PO from PR"),
    ("PO1", "R1", "Invoice from PO"),
    ("PO1", "R2", "Invoice from PO"),
    ("R1", "P1", "Payment from invoice"),
    ("R2", "P2", "Payment from invoice"),
    ("PO2", "R3", "Maverick buying"),
    ("R3", "P3", "Payment from invoice"),
]


def _utc(text: str) -> datetime:
    return datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc)


def running_example() -> Log:
    """Build the example log: 13 events, 9 objects, 20 E2O and 7 O2O relations

    The second scenario's payment is P3 throughout (the narrative calls it P4
    once), and PO2's initial values sit at the epoch like every other object.
    """
    builder = LogBuilder()
    for event_type, resource in EVENT_TYPES:
        builder.add_event_type(event_type, [(resource, STRING)])
    builder.add_object_type(
        "Purchase Requisition", [("pr_product", STRING), ("pr_quantity", INTEGER)]
    )
    builder.add_object_type(
        "Purchase Order", [("po_product", STRING), ("po_quantity", INTEGER)]
    )
    builder.add_object_type("Invoice", [("is_blocked", STRING)])
    builder.add_object_type("Payment")

    resources = dict(EVENT_TYPES)
    for event_id, event_type, time, resource in EVENTS:
        builder.add_event(event_id, event_type, _utc(time), {resources[event_type]: resource})

    (
        builder.add_object("PR1", "Purchase Requisition")
        .assign("PR1", "pr_product", "Cows", ZERO)
        .assign("PR1", "pr_quantity", 500, ZERO)
    )
    (
        builder.add_object("PO1", "Purchase Order")
        .assign("PO1", "po_product", "Cows", ZERO)
        .assign("PO1", "po_quantity", 500, ZERO)
        .assign("PO1", "po_quantity", 600, _utc("2022-01-13T12:00:00Z"))
    )
    (
        builder.add_object("PO2", "Purchase Order")
        .assign("PO2", "po_product", "Notebooks", ZERO)
        .assign("PO2", "po_quantity", 1, ZERO)
    )
    builder.add_object("R1", "Invoice").assign("R1", "is_blocked", "No", ZERO)
    builder.add_object("R2", "Invoice").assign("R2", "is_blocked", "No", ZERO)
    (
        builder.add_object("R3", "Invoice")
        .assign("R3", "is_blocked", "No", ZERO)
        .assign("R3", "is_blocked", "Yes", _utc("2022-02-03T07:30:00Z"))
        .assign("R3", "is_blocked", "No", _utc("2022-02-03T23:30:00Z"))
    )
    for payment in ("P1", "P2", "P3"):
        builder.add_object(payment, "Payment")

    for event_id, object_id, qualifier in E2O:
        builder.relate_event(event_id, object_id, qualifier)
    for source_id, target_id, qualifier in O2O:
        builder.relate_objects(source_id, target_id, qualifier)
    return builder.build()
