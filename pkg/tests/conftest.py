import hypothesis
import pytest

from storynets import textpipe

hypothesis.settings.register_profile(
    "suite", max_examples=50, deadline=None
)
hypothesis.settings.load_profile("suite")


# A five-sentence story used end to end: prompt triad (gloom, payment,
# exist), pronoun "I" recurring across sentences.
DEMO_STORY_TEXT = (
    "There is a heavy gloom hanging over me today. "
    "The loan sharks are after me because I have a payment that is late. "
    "They exist to punish people like me, down own there luck. "
    "I might as well face the music and ask the boss for an extension on "
    "paying him back even though it will cost me more. "
    "I have learned one thing though, never bet on a rubber ducky race and "
    "use a bookie."
)

DEMO_STORY_CONLLU = """\
# story_id = demo1
1\tThere\tthere\tPRON\t_\t_\t2\texpl\t_\t_
2\tis\tbe\tAUX\t_\t_\t0\troot\t_\t_
3\ta\ta\tDET\t_\t_\t5\tdet\t_\t_
4\theavy\theavy\tADJ\t_\t_\t5\tamod\t_\t_
5\tgloom\tgloom\tNOUN\t_\t_\t2\tnsubj\t_\t_
6\thanging\thang\tVERB\t_\t_\t5\tacl\t_\t_
7\tover\tover\tADP\t_\t_\t8\tcase\t_\t_
8\tme\ti\tPRON\t_\t_\t6\tobl\t_\t_
9\ttoday\ttoday\tNOUN\t_\t_\t6\tobl\t_\t_
10\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_

# story_id = demo1
1\tThe\tthe\tDET\t_\t_\t3\tdet\t_\t_
2\tloan\tloan\tNOUN\t_\t_\t3\tcompound\t_\t_
3\tsharks\tshark\tNOUN\t_\t_\t4\tnsubj\t_\t_
4\tare\tbe\tAUX\t_\t_\t0\troot\t_\t_
5\tafter\tafter\tADP\t_\t_\t6\tcase\t_\t_
6\tme\ti\tPRON\t_\t_\t4\tobl\t_\t_
7\tbecause\tbecause\tSCONJ\t_\t_\t9\tmark\t_\t_
8\tI\ti\tPRON\t_\t_\t9\tnsubj\t_\t_
9\thave\thave\tVERB\t_\t_\t4\tadvcl\t_\t_
10\ta\ta\tDET\t_\t_\t11\tdet\t_\t_
11\tpayment\tpayment\tNOUN\t_\t_\t9\tobj\t_\t_
12\tthat\tthat\tPRON\t_\t_\t14\tnsubj\t_\t_
13\tis\tbe\tAUX\t_\t_\t14\tcop\t_\t_
14\tlate\tlate\tADJ\t_\t_\t11\tacl\t_\t_
15\t.\t.\tPUNCT\t_\t_\t4\tpunct\t_\t_

# story_id = demo1
1\tThey\tthey\tPRON\t_\t_\t2\tnsubj\t_\t_
2\texist\texist\tVERB\t_\t_\t0\troot\t_\t_
3\tto\tto\tPART\t_\t_\t4\tmark\t_\t_
4\tpunish\tpunish\tVERB\t_\t_\t2\tadvcl\t_\t_
5\tpeople\tpeople\tNOUN\t_\t_\t4\tobj\t_\t_
6\tlike\tlike\tADP\t_\t_\t7\tcase\t_\t_
7\tme\ti\tPRON\t_\t_\t5\tnmod\t_\t_
8\t,\t,\tPUNCT\t_\t_\t2\tpunct\t_\t_
9\tdown\tdown\tADV\t_\t_\t12\tadvmod\t_\t_
10\town\town\tADJ\t_\t_\t12\tamod\t_\t_
11\tthere\tthere\tPRON\t_\t_\t12\tnmod\t_\t_
12\tluck\tluck\tNOUN\t_\t_\t2\tobl\t_\t_
13\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_

# story_id = demo1
1\tI\ti\tPRON\t_\t_\t5\tnsubj\t_\t_
2\tmight\tmight\tAUX\t_\t_\t5\taux\t_\t_
3\tas\tas\tADV\t_\t_\t4\tadvmod\t_\t_
4\twell\twell\tADV\t_\t_\t5\tadvmod\t_\t_
5\tface\tface\tVERB\t_\t_\t0\troot\t_\t_
6\tthe\tthe\tDET\t_\t_\t7\tdet\t_\t_
7\tmusic\tmusic\tNOUN\t_\t_\t5\tobj\t_\t_
8\tand\tand\tCCONJ\t_\t_\t9\tcc\t_\t_
9\task\task\tVERB\t_\t_\t5\tconj\t_\t_
10\tthe\tthe\tDET\t_\t_\t11\tdet\t_\t_
11\tboss\tboss\tNOUN\t_\t_\t9\tobj\t_\t_
12\tfor\tfor\tADP\t_\t_\t14\tcase\t_\t_
13\tan\ta\tDET\t_\t_\t14\tdet\t_\t_
14\textension\textension\tNOUN\t_\t_\t9\tobl\t_\t_
15\ton\ton\tSCONJ\t_\t_\t16\tmark\t_\t_
16\tpaying\tpay\tVERB\t_\t_\t14\tacl\t_\t_
17\thim\the\tPRON\t_\t_\t16\tobj\t_\t_
18\tback\tback\tADV\t_\t_\t16\tadvmod\t_\t_
19\teven\teven\tADV\t_\t_\t20\tadvmod\t_\t_
20\tthough\tthough\tSCONJ\t_\t_\t23\tmark\t_\t_
21\tit\tit\tPRON\t_\t_\t23\tnsubj\t_\t_
22\twill\twill\tAUX\t_\t_\t23\taux\t_\t_
23\tcost\tcost\tVERB\t_\t_\t16\tadvcl\t_\t_
24\tme\ti\tPRON\t_\t_\t23\tiobj\t_\t_
25\tmore\tmore\tADJ\t_\t_\t23\tobj\t_\t_
26\t.\t.\tPUNCT\t_\t_\t5\tpunct\t_\t_

# story_id = demo1
1\tI\ti\tPRON\t_\t_\t3\tnsubj\t_\t_
2\thave\thave\tAUX\t_\t_\t3\taux\t_\t_
3\tlearned\tlearn\tVERB\t_\t_\t0\troot\t_\t_
4\tone\tone\tNUM\t_\t_\t5\tnummod\t_\t_
5\tthing\tthing\tNOUN\t_\t_\t3\tobj\t_\t_
6\tthough\tthough\tADV\t_\t_\t3\tadvmod\t_\t_
7\t,\t,\tPUNCT\t_\t_\t3\tpunct\t_\t_
8\tnever\tnever\tADV\t_\t_\t9\tadvmod\t_\t_
9\tbet\tbet\tVERB\t_\t_\t3\tparataxis\t_\t_
10\ton\ton\tADP\t_\t_\t14\tcase\t_\t_
11\ta\ta\tDET\t_\t_\t14\tdet\t_\t_
12\trubber\trubber\tNOUN\t_\t_\t14\tcompound\t_\t_
13\tducky\tducky\tADJ\t_\t_\t14\tamod\t_\t_
14\trace\trace\tNOUN\t_\t_\t9\tobl\t_\t_
15\tand\tand\tCCONJ\t_\t_\t16\tcc\t_\t_
16\tuse\tuse\tVERB\t_\t_\t9\tconj\t_\t_
17\ta\ta\tDET\t_\t_\t18\tdet\t_\t_
18\tbookie\tbookie\tNOUN\t_\t_\t16\tobj\t_\t_
19\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_
"""

LEXICON_TSV = """\
happy\tjoy\t1
happy\tpositive\t1
happy\tsadness\t0
grim\tsadness\t1
grim\tnegative\t1
angry\tanger\t1
angry\tnegative\t1
sad\tsadness\t1
sad\tnegative\t1
calm\ttrust\t1
calm\tpositive\t1
shock\tsurprise\t1
dread\tfear\t1
dread\tnegative\t1
rot\tdisgust\t1
rot\tnegative\t1
hope\tanticipation\t1
hope\tpositive\t1
gloom\tsadness\t1
gloom\tnegative\t1
table\tjoy\t0
chair\tjoy\t0
"""


def make_token(lemma, idx, sentence_index=0, upos="NOUN", head=None, deprel=None,
               stop=False, pron=False, surface=None):
    return textpipe.Token(
        surface=surface if surface is not None else lemma,
        lemma=lemma,
        upos=upos,
        sentence_index=sentence_index,
        token_index=idx,
        head_index=head,
        deprel=deprel,
        is_stop=stop,
        is_pronoun=pron,
    )


def make_sentence(lemmas, sentence_index=0):
    return tuple(make_token(l, i, sentence_index) for i, l in enumerate(lemmas))


@pytest.fixture
def demo_story():
    stoplist = textpipe.default_stoplist()
    pronouns = textpipe.default_pronouns()
    parsed = textpipe.read_conllu(DEMO_STORY_CONLLU, stoplist, pronouns)
    return textpipe.Story(
        id="demo1",
        prompt_lemmas=("gloom", "payment", "exist"),
        text=DEMO_STORY_TEXT,
        sentences=parsed["demo1"],
        ratings={"H": 3, "J": 4, "K": 3, "N": 4},
    )


@pytest.fixture
def demo_lexicon():
    from storynets import affect

    return affect.load_lexicon(LEXICON_TSV)
