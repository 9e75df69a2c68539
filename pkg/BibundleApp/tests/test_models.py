import json
import os
import shutil
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from BibundleApp import documents
from BibundleApp.action import make_action
from BibundleApp.exceptions import DocumentError
from BibundleApp.groupoid import cyclic_group_table, group_groupoid
from BibundleApp.management.base import resolve_stored
from BibundleApp.models import Document


def z(n):
    return group_groupoid(cyclic_group_table(n))


def record(structure, name):
    return documents.to_json(documents.document_for(structure, name))


class DocumentModelTests(TestCase):
    def test_roundtrip_through_the_database(self):
        Document.from_document(documents.document_for(z(3), 'z3')).save()
        stored = Document.objects.get(name='z3')
        self.assertEqual(str(stored), 'groupoid z3')
        self.assertEqual(stored.to_document().payload, z(3))

    def test_resolve_stored_accepts_both_spellings(self):
        Document.from_document(documents.document_for(z(2), 'z2')).save()
        self.assertEqual(resolve_stored('db:z2').payload, z(2))
        self.assertEqual(resolve_stored('z2').payload, z(2))
        with self.assertRaises(DocumentError):
            resolve_stored('db:z5')


class LoadDocumentsTests(TestCase):
    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def write(self, data):
        path = os.path.join(self.tmp_dir, 'documents.json')
        with open(path, 'w') as handle:
            json.dump(data, handle)
        return path

    def load(self, path, mode='append'):
        out = StringIO()
        call_command('load_documents', path, mode=mode, stdout=out)
        return out.getvalue()

    def test_append_skips_existing_names(self):
        path = self.write({'documents': [record(z(2), 'a'), record(z(3), 'b')]})
        out = self.load(path)
        self.assertIn('Created: 2', out)
        self.assertEqual(Document.objects.count(), 2)
        out = self.load(self.write([record(z(4), 'a')]))
        self.assertIn('Skipped: 1', out)
        self.assertEqual(Document.objects.get(name='a').to_document().payload, z(2))

    def test_overwrite_replaces_payloads(self):
        self.load(self.write(record(z(2), 'a')))
        out = self.load(self.write(record(z(4), 'a')), mode='overwrite')
        self.assertIn('Updated: 1', out)
        self.assertEqual(Document.objects.get(name='a').to_document().payload, z(4))

    def test_clear_removes_everything_first(self):
        self.load(self.write([record(z(2), 'a'), record(z(3), 'b')]))
        out = self.load(self.write([record(z(5), 'c')]), mode='clear')
        self.assertIn('Total documents processed: 1', out)
        self.assertEqual(list(Document.objects.values_list('name', flat=True)), ['c'])

    def test_later_documents_may_reference_earlier_ones(self):
        action = record(make_action(z(2), 1, [0], [(0, 0, 0), (1, 0, 0)]), 'fixed')
        action['payload']['groupoid'] = 'db:z2'
        self.load(self.write([record(z(2), 'z2'), action]))
        stored = Document.objects.get(name='fixed').payload
        self.assertEqual(stored['groupoid'], documents.groupoid_payload(z(2)))
        self.assertEqual(resolve_stored('db:fixed').payload.groupoid, z(2))

    def test_invalid_document_rolls_back(self):
        broken = record(z(2), 'broken')
        broken['payload']['inv'] = [0, 0]
        path = self.write([record(z(3), 'fine'), broken])
        with self.assertRaises(CommandError) as ctx:
            self.load(path)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertFalse(Document.objects.exists())

    def test_nameless_document_is_rejected(self):
        with self.assertRaises(CommandError) as ctx:
            self.load(self.write(record(z(2), '')))
        self.assertIn('has no name', str(ctx.exception))

    def test_missing_file(self):
        with self.assertRaises(CommandError) as ctx:
            self.load(os.path.join(self.tmp_dir, 'absent.json'))
        self.assertEqual(ctx.exception.returncode, 2)
