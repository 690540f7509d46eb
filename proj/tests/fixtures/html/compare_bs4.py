import sys, glob, json, re, subprocess, os
from bs4 import BeautifulSoup, Comment, Doctype, CData, ProcessingInstruction, Declaration
for f in sorted(glob.glob('tests/fixtures/html/*.html')):
    raw = open(f,'rb').read()
    soup = BeautifulSoup(raw, 'html.parser')
    for t in soup(['script','style','noscript','template']): t.decompose()
    for c in soup.find_all(string=lambda s: isinstance(s,(Comment,Doctype,CData,ProcessingInstruction,Declaration))): c.extract()
    ref = re.sub(r'\s+',' ', soup.get_text(' ').replace('\xa0',' ')).strip()
    subprocess.run(['./build/tools/agora','extract','--in',f,'--out','/tmp/x.jsonl'],stderr=subprocess.DEVNULL)
    mine = json.loads(open('/tmp/x.jsonl').readline())['text']
    print('SAME' if ref==mine else 'DIFF', os.path.basename(f), '' if ref==mine else repr(ref))
