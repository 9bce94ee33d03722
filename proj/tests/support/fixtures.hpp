#pragma once

// Grammar and aspect texts used across the suites; they mirror testdata/.

#include "grammatic/parser.hpp"
#include "grammatic/template_engine.hpp"

namespace fixtures {

inline constexpr const char* kExprGrammar = R"(
const : ID '=' sum ';' ;
varDecl : type ID ('=' sum)? ';' ;
type : ID;
sum : mult ('+' mult)* ;
mult : factor ('*' factor)* ;
factor : NUM || ID || '(' sum ')' ;
ALPHA : ['a'--'z' 'A'--'Z' '_'] ;
ID : ALPHA (ALPHA | ['0'--'9'])* ;
NUM : ['0'--'9']+ ;
)";

inline constexpr const char* kBinaryOpGrammar = R"(
Symbol binaryOperation<ID $name, Expression $sign, Expression $argument> {
    $name --> $argument ($sign $argument)*;
}

import binaryOperation<Product, '*' | '/', Factor>;
import binaryOperation<Sum, '+' | '-', Product>;
Factor
    --> NUMBER
    || ID
    || '(' Sum ')'
    ;
NUMBER : ['0'--'9']+ ;
ID : ['a'--'z']+ ;
)";

inline constexpr const char* kAttributeValueGrammar = R"(
Symbol attributeValue<Production* $moreValueTypes> {
    AttributeValue
        --> STRING
        || ID
        || INT
        || Annotation
        || ValueSequence
        || $moreValueTypes
        ;
}

import attributeValue<
    '{{{' Expression '}}}'
>;

STRING : '"' ALPHA* '"' ;
ID : ALPHA+ ;
INT : ['0'--'9']+ ;
ALPHA : ['a'--'z' 'A'--'Z' '_'] ;
Annotation : ID ;
ValueSequence : ID ;
Expression : ID ;
)";

inline constexpr const char* kSumAspect = R"(
sum [[returns = int;]]
    $:--> ..
    [[
        before = '##result = 0;';
        #mult.after = <<
##result += #mult;
>>;
    ]];
)";

inline constexpr const char* kNewlineGrammar = "NEWLINE : '\\r'? '\\n' || '\\r';\n";

inline constexpr const char* kNewlineAspect = R"(
NEWLINE
    $:--> ..
    [[
        predicate = <<'\r'? '\n'>>;
    ]]
    --> '\r';
)";

inline constexpr const char* kLeftRecAspect = R"(
#Rec --> #Rec ..;
[[
    Rec {
        leftRecursive;
    };
]];
)";

inline constexpr const char* kBuildersGrammar = R"(
sum : mult ('+' mult)* ;
mult : NUM ;
NUM : ['0'--'9']+ ;
)";

inline constexpr const char* kBuildersAspect = R"(
sum
    [[
        builders = {{
            Expression varSum(Scope scope);
            int constSum(Context context);
        }};
    ]]
    --> mult ..
    [[
        #mult.call = {
            varSum = {{varMult(scope)}};
            constSum = {{constMult(context)}};
        };
    ]];

mult
    [[
        builders = {{
            Expression varMult(Scope scope);
            int constMult(Context context);
        }};
    ]];
)";

inline grammatic::Grammar expr_grammar() {
    return grammatic::resolve(grammatic::parse_grammar(kExprGrammar, "expr.gr"));
}

}  // namespace fixtures
